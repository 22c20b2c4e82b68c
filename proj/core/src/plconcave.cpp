#include "cms/plconcave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cms {

namespace {

// Merges duplicate x-coordinates and collinear interior breakpoints, checks
// domain and concavity.
void normalize(std::vector<double>& xs, std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ParameterError("plconcave: need at least two breakpoints");
  }
  for (double x : xs) {
    if (!std::isfinite(x)) throw ParameterError("plconcave: non-finite x");
  }
  for (double y : ys) {
    if (!std::isfinite(y)) throw ParameterError("plconcave: non-finite y");
  }
  if (std::abs(xs.front()) > kTol || std::abs(xs.back() - 1.0) > kTol) {
    throw ParameterError("plconcave: domain must be exactly [0,1]");
  }
  xs.front() = 0.0;
  xs.back() = 1.0;
  std::vector<double> nx, ny;
  nx.reserve(xs.size());
  ny.reserve(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i && xs[i] < nx.back() - 1e-15) {
      throw ParameterError("plconcave: x-coordinates must be increasing");
    }
    if (i && xs[i] - nx.back() <= 1e-15) {
      if (std::abs(ys[i] - ny.back()) > kTol) {
        throw ParameterError("plconcave: two values at the same q");
      }
      continue;
    }
    nx.push_back(xs[i]);
    ny.push_back(ys[i]);
  }
  if (nx.size() < 2) throw ParameterError("plconcave: degenerate breakpoints");
  // Concavity and collinear merges.
  std::vector<double> mx = {nx[0]}, my = {ny[0]};
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < nx.size(); ++i) {
    const double slope = (ny[i] - my.back()) / (nx[i] - mx.back());
    if (slope > prev_slope + kTol) {
      throw ParameterError("plconcave: slopes increase; not concave");
    }
    if (mx.size() > 1 && std::abs(slope - prev_slope) < kSlopeMergeTol) {
      mx.back() = nx[i];
      my.back() = ny[i];
      prev_slope = (my.back() - my[my.size() - 2]) /
                   (mx.back() - mx[mx.size() - 2]);
    } else {
      mx.push_back(nx[i]);
      my.push_back(ny[i]);
      prev_slope = slope;
    }
  }
  xs = std::move(mx);
  ys = std::move(my);
}

}  // namespace

PLConcave::PLConcave() : xs_{0.0, 1.0}, ys_{0.0, 0.0} {}

PLConcave::PLConcave(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  normalize(xs_, ys_);
}

PLConcave PLConcave::linear(double slope) {
  return PLConcave({0.0, 1.0}, {0.0, slope});
}

double PLConcave::operator()(double q) const {
  if (q < -1e-12 || q > 1.0 + 1e-12) {
    throw ParameterError("plconcave: argument outside [0,1]");
  }
  q = std::clamp(q, 0.0, 1.0);
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), q);
  const std::size_t hi = std::min<std::size_t>(
      static_cast<std::size_t>(it - xs_.begin()), xs_.size() - 1);
  const std::size_t lo = hi - 1;
  const double t = (q - xs_[lo]) / (xs_[hi] - xs_[lo]);
  return ys_[lo] + t * (ys_[hi] - ys_[lo]);
}

double PLConcave::supergradient(double q) const {
  if (q < -1e-12 || q > 1.0 + 1e-12) {
    throw ParameterError("plconcave: argument outside [0,1]");
  }
  q = std::clamp(q, 0.0, 1.0);
  std::size_t hi;
  if (q >= 1.0) {
    hi = xs_.size() - 1;  // left slope at the right endpoint
  } else {
    hi = static_cast<std::size_t>(
        std::upper_bound(xs_.begin(), xs_.end(), q) - xs_.begin());
  }
  return (ys_[hi] - ys_[hi - 1]) / (xs_[hi] - xs_[hi - 1]);
}

PLConcave upper_expectation(const DiscreteDistribution& d) {
  if (d.min_value() < 0.0) {
    throw ParameterError("upper_expectation: support must be nonnegative");
  }
  const auto& atoms = d.atoms();
  std::vector<double> xs = {0.0}, ys = {0.0};
  double cum_p = 0.0, cum_v = 0.0;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    cum_p += it->probability;
    cum_v += it->probability * it->value;
    xs.push_back(cum_p);
    ys.push_back(cum_v);
  }
  xs.back() = 1.0;
  return PLConcave(std::move(xs), std::move(ys));
}

PLConcave weighted_sup_convolution(
    const std::vector<std::pair<double, const PLConcave*>>& parts) {
  if (parts.empty()) {
    throw ParameterError("weighted_sup_convolution: no parts");
  }
  double total_weight = 0.0;
  double base = 0.0;
  struct Segment {
    double slope;
    double width;
  };
  std::vector<Segment> segments;
  for (const auto& [w, f] : parts) {
    if (w <= 0.0) {
      throw ParameterError("weighted_sup_convolution: weights must be positive");
    }
    total_weight += w;
    base += w * f->value_at_zero();
    const auto& xs = f->xs();
    const auto& ys = f->ys();
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double width = w * (xs[i] - xs[i - 1]);
      if (width <= 0.0) continue;
      segments.push_back({(ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]), width});
    }
  }
  if (std::abs(total_weight - 1.0) > kTol) {
    throw ParameterError("weighted_sup_convolution: weights must sum to 1");
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.slope > b.slope; });
  std::vector<double> xs = {0.0}, ys = {base};
  for (const Segment& seg : segments) {
    xs.push_back(xs.back() + seg.width);
    ys.push_back(ys.back() + seg.slope * seg.width);
  }
  xs.back() = 1.0;
  return PLConcave(std::move(xs), std::move(ys));
}

std::vector<std::size_t> upper_hull_indices(const std::vector<double>& xs,
                                            const std::vector<double>& ys) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (xs[a] != xs[b]) return xs[a] < xs[b];
    return ys[a] > ys[b];
  });
  std::vector<std::size_t> hull;
  for (std::size_t idx : order) {
    if (!hull.empty() && xs[hull.back()] == xs[idx]) continue;  // keep max y
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull[hull.size() - 1];
      const double cross = (xs[a] - xs[o]) * (ys[idx] - ys[o]) -
                           (ys[a] - ys[o]) * (xs[idx] - xs[o]);
      if (cross >= 0.0) {
        hull.pop_back();  // a lies on or below the chord o -> idx
      } else {
        break;
      }
    }
    hull.push_back(idx);
  }
  return hull;
}

PLConcave concave_envelope(const std::vector<const PLConcave*>& fs) {
  if (fs.empty()) throw ParameterError("concave_envelope: empty input");
  std::vector<double> xs, ys;
  for (const PLConcave* f : fs) {
    xs.insert(xs.end(), f->xs().begin(), f->xs().end());
    ys.insert(ys.end(), f->ys().begin(), f->ys().end());
  }
  const auto hull = upper_hull_indices(xs, ys);
  std::vector<double> hx, hy;
  hx.reserve(hull.size());
  hy.reserve(hull.size());
  for (std::size_t idx : hull) {
    hx.push_back(xs[idx]);
    hy.push_back(ys[idx]);
  }
  return PLConcave(std::move(hx), std::move(hy));
}

PLConcave shift(const PLConcave& f, double delta) {
  std::vector<double> ys = f.ys();
  for (double& y : ys) y -= delta;
  return PLConcave(f.xs(), std::move(ys));
}

PLConcave iron(const std::vector<double>& grid, std::vector<double> values,
               double cap_at_b, double b) {
  if (grid.size() < 2 || values.size() != grid.size()) {
    throw ParameterError("iron: grid and values must match, length >= 2");
  }
  if (grid.front() != 0.0 || grid.back() != 1.0) {
    throw ParameterError("iron: grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw ParameterError("iron: grid must be strictly increasing");
    }
  }
  if (std::abs(grid[1] - b) > 1e-12) {
    throw ParameterError("iron: second grid point must equal b");
  }
  values[1] = std::min(values[1], cap_at_b);
  for (std::size_t t = 2; t < values.size(); ++t) {
    values[t] = std::max(values[t], values[t - 1]);
  }
  const auto hull = upper_hull_indices(grid, values);
  std::vector<double> hx, hy;
  for (std::size_t idx : hull) {
    hx.push_back(grid[idx]);
    hy.push_back(values[idx]);
  }
  return PLConcave(std::move(hx), std::move(hy));
}

}  // namespace cms
