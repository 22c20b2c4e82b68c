#include "cms/matroid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace cms {

namespace {

std::uint32_t to_mask(int n, const std::vector<int>& s) {
  std::uint32_t mask = 0;
  for (int e : s) {
    if (e < 0 || e >= n) {
      throw ParameterError("matroid: element " + std::to_string(e) +
                           " out of range");
    }
    mask |= 1u << e;
  }
  return mask;
}

std::vector<int> from_mask(std::uint32_t mask) {
  std::vector<int> out;
  for (int e = 0; mask; ++e, mask >>= 1) {
    if (mask & 1u) out.push_back(e);
  }
  return out;
}

constexpr double kPipageTol = 1e-9;

}  // namespace

Matroid Matroid::uniform(int n, int rank) {
  if (n < 0 || rank < 0) throw ParameterError("matroid: negative size or rank");
  Matroid m;
  m.kind_ = Kind::kUniform;
  m.n_ = n;
  m.uniform_rank_ = std::min(rank, n);
  return m;
}

Matroid Matroid::partition(int n, std::vector<std::vector<int>> blocks,
                           std::vector<int> capacities) {
  if (blocks.size() != capacities.size()) {
    throw ParameterError("matroid: one capacity per block required");
  }
  Matroid m;
  m.kind_ = Kind::kPartition;
  m.n_ = n;
  m.block_of_.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (capacities[b] < 0) throw ParameterError("matroid: negative capacity");
    for (int e : blocks[b]) {
      if (e < 0 || e >= n) throw ParameterError("matroid: block element out of range");
      if (m.block_of_[static_cast<std::size_t>(e)] != -1) {
        throw ParameterError("matroid: element in two blocks");
      }
      m.block_of_[static_cast<std::size_t>(e)] = static_cast<int>(b);
    }
  }
  for (int e = 0; e < n; ++e) {
    if (m.block_of_[static_cast<std::size_t>(e)] == -1) {
      throw ParameterError("matroid: element " + std::to_string(e) +
                           " not covered by any block");
    }
  }
  m.blocks_ = std::move(blocks);
  m.capacities_ = std::move(capacities);
  return m;
}

Matroid Matroid::explicit_family(
    int n, const std::vector<std::vector<int>>& independent_sets) {
  if (n > 12) {
    throw ParameterError("matroid: explicit families supported up to n = 12");
  }
  Matroid m;
  m.kind_ = Kind::kExplicit;
  m.n_ = n;
  for (const auto& s : independent_sets) {
    m.explicit_sets_.push_back(to_mask(n, s));
  }
  std::sort(m.explicit_sets_.begin(), m.explicit_sets_.end());
  m.explicit_sets_.erase(
      std::unique(m.explicit_sets_.begin(), m.explicit_sets_.end()),
      m.explicit_sets_.end());
  if (m.explicit_sets_.empty() || m.explicit_sets_.front() != 0u) {
    throw ParameterError("matroid: family must contain the empty set");
  }
  // Downward closure.
  for (std::uint32_t s : m.explicit_sets_) {
    for (int e = 0; e < n; ++e) {
      if (!(s & (1u << e))) continue;
      if (!std::binary_search(m.explicit_sets_.begin(), m.explicit_sets_.end(),
                              s & ~(1u << e))) {
        throw ParameterError("matroid: family is not downward-closed");
      }
    }
  }
  // Exchange property, checked exhaustively.
  for (std::uint32_t a : m.explicit_sets_) {
    for (std::uint32_t b : m.explicit_sets_) {
      if (std::popcount(a) <= std::popcount(b)) continue;
      bool extended = false;
      std::uint32_t candidates = a & ~b;
      while (candidates) {
        const std::uint32_t bit = candidates & (~candidates + 1);
        candidates ^= bit;
        if (std::binary_search(m.explicit_sets_.begin(), m.explicit_sets_.end(),
                               b | bit)) {
          extended = true;
          break;
        }
      }
      if (!extended) {
        throw ParameterError("matroid: family violates the exchange property");
      }
    }
  }
  return m;
}

bool Matroid::independent_mask(std::uint32_t s) const {
  switch (kind_) {
    case Kind::kUniform:
      return std::popcount(s) <= uniform_rank_;
    case Kind::kPartition: {
      std::vector<int> used(capacities_.size(), 0);
      std::uint32_t rest = s;
      while (rest) {
        const int e = std::countr_zero(rest);
        rest &= rest - 1;
        const int b = block_of_[static_cast<std::size_t>(e)];
        if (++used[static_cast<std::size_t>(b)] > capacities_[static_cast<std::size_t>(b)]) {
          return false;
        }
      }
      return true;
    }
    case Kind::kExplicit:
      return std::binary_search(explicit_sets_.begin(), explicit_sets_.end(), s);
  }
  return false;
}

bool Matroid::independent(const std::vector<int>& s) const {
  return independent_mask(to_mask(n_, s));
}

int Matroid::rank_mask(std::uint32_t s) const {
  // Greedy extension; correct for matroids.
  std::uint32_t basis = 0;
  int r = 0;
  std::uint32_t rest = s;
  while (rest) {
    const std::uint32_t bit = rest & (~rest + 1);
    rest ^= bit;
    if (independent_mask(basis | bit)) {
      basis |= bit;
      ++r;
    }
  }
  return r;
}

int Matroid::rank(const std::vector<int>& s) const {
  return rank_mask(to_mask(n_, s));
}

std::vector<std::vector<int>> Matroid::independent_family() const {
  std::vector<std::vector<int>> out;
  out.reserve(explicit_sets_.size());
  for (std::uint32_t s : explicit_sets_) out.push_back(from_mask(s));
  return out;
}

std::vector<std::uint16_t> build_rank_table(const Matroid& m, int max_n) {
  const int n = m.ground_size();
  if (n > max_n || n > 25) {
    throw SizeLimitError("build_rank_table: ground set of " +
                         std::to_string(n) + " exceeds enumeration budget");
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::uint16_t> ranks(size, 0);
  std::vector<std::uint32_t> basis(size, 0);
  for (std::uint32_t s = 1; s < size; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s ^ low;
    // Extend a maximal independent subset of s \ {low} by low if possible.
    if (m.independent_mask(basis[rest] | low)) {
      basis[s] = basis[rest] | low;
      ranks[s] = static_cast<std::uint16_t>(ranks[rest] + 1);
    } else {
      basis[s] = basis[rest];
      ranks[s] = ranks[rest];
    }
  }
  return ranks;
}

PolytopeCheck polytope_member(const Matroid& m, const FractionalPoint& q,
                              int budget) {
  const int n = m.ground_size();
  if (static_cast<int>(q.q.size()) != n) {
    throw ParameterError("polytope_member: dimension mismatch");
  }
  PolytopeCheck check;
  for (int i = 0; i < n; ++i) {
    if (q.q[static_cast<std::size_t>(i)] < -kTol) {
      check.violated = {i};
      check.excess = -q.q[static_cast<std::size_t>(i)];
      return check;
    }
    if (q.q[static_cast<std::size_t>(i)] > 1.0 + kTol) {
      check.violated = {i};
      check.excess = q.q[static_cast<std::size_t>(i)] - 1.0;
      return check;
    }
  }
  const auto ranks = build_rank_table(m, budget);
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> sums(size, 0.0);
  double worst = kTol;
  std::uint32_t worst_set = 0;
  for (std::uint32_t s = 1; s < size; ++s) {
    const std::uint32_t low = s & (~s + 1);
    sums[s] = sums[s ^ low] + q.q[static_cast<std::size_t>(std::countr_zero(low))];
    const double excess = sums[s] - ranks[s];
    if (excess > worst) {
      worst = excess;
      worst_set = s;
    }
  }
  if (worst_set) {
    check.violated = from_mask(worst_set);
    check.excess = worst;
    return check;
  }
  check.member = true;
  return check;
}

std::vector<int> max_weight_independent(const Matroid& m,
                                        const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != m.ground_size()) {
    throw ParameterError("max_weight_independent: dimension mismatch");
  }
  std::vector<int> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w[static_cast<std::size_t>(a)] != w[static_cast<std::size_t>(b)]) {
      return w[static_cast<std::size_t>(a)] > w[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  std::uint32_t chosen = 0;
  for (int e : order) {
    if (w[static_cast<std::size_t>(e)] <= 0.0) break;
    if (m.independent_mask(chosen | (1u << e))) chosen |= 1u << e;
  }
  return from_mask(chosen);
}

double remaining_value_mask(const Matroid& m, const std::vector<double>& z,
                            std::uint32_t available, std::uint32_t excluded) {
  if (!m.independent_mask(excluded)) {
    throw ParameterError("remaining_value: excluded set must be independent");
  }
  std::vector<int> order;
  std::uint32_t rest = available & ~excluded;
  while (rest) {
    const int e = std::countr_zero(rest);
    rest &= rest - 1;
    order.push_back(e);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (z[static_cast<std::size_t>(a)] != z[static_cast<std::size_t>(b)]) {
      return z[static_cast<std::size_t>(a)] > z[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  std::uint32_t chosen = excluded;
  double total = 0.0;
  for (int e : order) {
    if (z[static_cast<std::size_t>(e)] <= 0.0) break;
    if (m.independent_mask(chosen | (1u << e))) {
      chosen |= 1u << e;
      total += z[static_cast<std::size_t>(e)];
    }
  }
  return total;
}

double remaining_value(const Matroid& m, const std::vector<double>& z,
                       const std::vector<int>& available,
                       const std::vector<int>& excluded) {
  return remaining_value_mask(m, z, to_mask(m.ground_size(), available),
                              to_mask(m.ground_size(), excluded));
}

PipageSampler::PipageSampler(const Matroid& m, const FractionalPoint& q)
    : q_(q.q) {
  const auto check = polytope_member(m, q);
  if (!check.member) {
    throw ParameterError("pipage: point is not in the matroid polytope");
  }
  ranks_ = build_rank_table(m);
  for (double& v : q_) v = std::clamp(v, 0.0, 1.0);
}

void PipageSampler::apply(std::vector<double>& y, int i, int j, double delta) {
  y[static_cast<std::size_t>(i)] += delta;
  y[static_cast<std::size_t>(j)] -= delta;
  for (int e : {i, j}) {
    double& v = y[static_cast<std::size_t>(e)];
    if (v < kPipageTol) v = 0.0;
    if (v > 1.0 - kPipageTol) v = 1.0;
  }
}

PipageSampler::Move PipageSampler::find_move(const std::vector<double>& y) const {
  const int n = static_cast<int>(y.size());
  const std::size_t size = std::size_t{1} << n;
  std::uint32_t frac_mask = 0;
  for (int e = 0; e < n; ++e) {
    const double v = y[static_cast<std::size_t>(e)];
    if (v > 0.0 && v < 1.0) frac_mask |= 1u << e;
  }
  Move move;
  if (std::popcount(frac_mask) < 2) return move;

  std::vector<double> sums(size, 0.0);
  for (std::uint32_t s = 1; s < size; ++s) {
    const std::uint32_t low = s & (~s + 1);
    sums[s] = sums[s ^ low] + y[static_cast<std::size_t>(std::countr_zero(low))];
  }
  // Minimal tight set containing at least two fractional coordinates; the
  // full ground set if none is tight.
  std::uint32_t working = (size == 1) ? 0 : static_cast<std::uint32_t>(size - 1);
  int working_card = n + 1;
  for (std::uint32_t s = 1; s < size; ++s) {
    if (std::popcount(s & frac_mask) < 2) continue;
    if (sums[s] < ranks_[s] - kPipageTol) continue;
    const int card = std::popcount(s);
    if (card < working_card) {
      working_card = card;
      working = s;
    }
  }

  const auto deltas = [&](int i, int j) {
    // Largest step of +delta on i, -delta on j keeping all constraints.
    double cap = std::min(1.0 - y[static_cast<std::size_t>(i)],
                          y[static_cast<std::size_t>(j)]);
    for (std::uint32_t s = 1; s < size && cap > 0.0; ++s) {
      if ((s & (1u << i)) && !(s & (1u << j))) {
        cap = std::min(cap, ranks_[s] - sums[s]);
      }
    }
    return std::max(cap, 0.0);
  };

  std::vector<int> frac = from_mask(working & frac_mask);
  for (std::size_t a = 0; a + 1 < frac.size() && move.i < 0; ++a) {
    for (std::size_t b = a + 1; b < frac.size(); ++b) {
      const double up = deltas(frac[a], frac[b]);
      const double dn = deltas(frac[b], frac[a]);
      if (up + dn > kPipageTol) {
        move = {frac[a], frac[b], up, dn};
        break;
      }
    }
  }
  if (move.i < 0) {
    // No movable pair inside the working set; scan all fractional pairs.
    frac = from_mask(frac_mask);
    for (std::size_t a = 0; a + 1 < frac.size() && move.i < 0; ++a) {
      for (std::size_t b = a + 1; b < frac.size(); ++b) {
        const double up = deltas(frac[a], frac[b]);
        const double dn = deltas(frac[b], frac[a]);
        if (up + dn > kPipageTol) {
          move = {frac[a], frac[b], up, dn};
          break;
        }
      }
    }
  }
  if (move.i < 0) {
    throw SizeLimitError("pipage: no movable fractional pair found");
  }
  return move;
}

std::vector<int> PipageSampler::sample(std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> y = q_;
  const int n = static_cast<int>(y.size());
  const int max_steps = 64 * n * n + 64;
  for (int step = 0;; ++step) {
    const Move move = find_move(y);
    if (move.i < 0) break;
    if (step >= max_steps) {
      throw SizeLimitError("pipage: step budget exceeded");
    }
    // Probability split that preserves marginals exactly.
    const double p_up = move.delta_dn / (move.delta_up + move.delta_dn);
    if (rng.uniform01() < p_up) {
      apply(y, move.i, move.j, move.delta_up);
    } else {
      apply(y, move.i, move.j, -move.delta_dn);
    }
  }
  std::uint32_t chosen = 0;
  for (int e = 0; e < n; ++e) {
    const double v = y[static_cast<std::size_t>(e)];
    if (v >= 1.0) {
      chosen |= 1u << e;
    } else if (v > 0.0) {
      // Single remaining fractional coordinate; rounding up stays feasible.
      if (rng.uniform01() < v) chosen |= 1u << e;
    }
  }
  return from_mask(chosen);
}

std::vector<int> sample_feasible_set(const Matroid& m, const FractionalPoint& q,
                                     std::uint64_t seed) {
  return PipageSampler(m, q).sample(seed);
}

std::vector<std::pair<double, std::vector<int>>> exact_dq(
    const Matroid& m, const FractionalPoint& q) {
  if (m.ground_size() > 12) {
    throw SizeLimitError("exact_dq: supported up to n = 12");
  }
  PipageSampler sampler(m, q);
  std::map<std::uint32_t, double> integral;
  std::vector<std::pair<double, std::vector<double>>> frontier = {
      {1.0, sampler.q_}};
  const int n = m.ground_size();
  while (!frontier.empty()) {
    if (frontier.size() > (std::size_t{1} << 20)) {
      throw SizeLimitError("exact_dq: decomposition frontier too large");
    }
    auto [p, y] = std::move(frontier.back());
    frontier.pop_back();
    if (p < 1e-12) continue;
    int frac = -1;
    int frac_count = 0;
    for (int e = 0; e < n; ++e) {
      const double v = y[static_cast<std::size_t>(e)];
      if (v > 0.0 && v < 1.0) {
        frac = e;
        ++frac_count;
      }
    }
    if (frac_count == 0) {
      std::uint32_t mask = 0;
      for (int e = 0; e < n; ++e) {
        if (y[static_cast<std::size_t>(e)] >= 1.0) mask |= 1u << e;
      }
      integral[mask] += p;
      continue;
    }
    if (frac_count == 1) {
      const double v = y[static_cast<std::size_t>(frac)];
      auto up = y, dn = y;
      up[static_cast<std::size_t>(frac)] = 1.0;
      dn[static_cast<std::size_t>(frac)] = 0.0;
      frontier.push_back({p * v, std::move(up)});
      frontier.push_back({p * (1.0 - v), std::move(dn)});
      continue;
    }
    const PipageSampler::Move move = sampler.find_move(y);
    const double p_up = move.delta_dn / (move.delta_up + move.delta_dn);
    auto up = y, dn = y;
    PipageSampler::apply(up, move.i, move.j, move.delta_up);
    PipageSampler::apply(dn, move.i, move.j, -move.delta_dn);
    if (p_up > 0.0) frontier.push_back({p * p_up, std::move(up)});
    if (p_up < 1.0) frontier.push_back({p * (1.0 - p_up), std::move(dn)});
  }
  double total = 0.0;
  for (const auto& [mask, p] : integral) total += p;
  std::vector<std::pair<double, std::vector<int>>> out;
  out.reserve(integral.size());
  for (const auto& [mask, p] : integral) {
    if (p / total < 1e-12) continue;
    out.push_back({p / total, from_mask(mask)});
  }
  return out;
}

}  // namespace cms
