#pragma once

#include <cstdint>
#include <vector>

#include "cms/common.hpp"
#include "cms/rng.hpp"

namespace cms {

// Matroid over ground set {0,...,n-1} behind an independence oracle. Three
// constructible kinds: uniform (rank bound), partition (per-block capacity),
// and an explicit downward-closed family (validated against the exchange
// property at construction, n <= 12).
class Matroid {
 public:
  enum class Kind { kUniform, kPartition, kExplicit };

  static Matroid uniform(int n, int rank);
  static Matroid partition(int n, std::vector<std::vector<int>> blocks,
                           std::vector<int> capacities);
  static Matroid explicit_family(
      int n, const std::vector<std::vector<int>>& independent_sets);

  Kind kind() const { return kind_; }
  int ground_size() const { return n_; }

  bool independent_mask(std::uint32_t s) const;
  bool independent(const std::vector<int>& s) const;
  int rank_mask(std::uint32_t s) const;
  int rank(const std::vector<int>& s) const;

  // Accessors for serialization.
  int uniform_rank() const { return uniform_rank_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& capacities() const { return capacities_; }
  std::vector<std::vector<int>> independent_family() const;

 private:
  Matroid() = default;

  Kind kind_ = Kind::kUniform;
  int n_ = 0;
  int uniform_rank_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
  std::vector<int> capacities_;
  std::vector<std::uint32_t> explicit_sets_;  // sorted masks
};

// rank(S) for every S as a flat table of size 2^n; the workhorse behind
// subset-enumeration operations. n above max_n raises SizeLimitError.
std::vector<std::uint16_t> build_rank_table(const Matroid& m,
                                            int max_n = kDefaultEnumerationBudget);

struct FractionalPoint {
  std::vector<double> q;
};

struct PolytopeCheck {
  bool member = false;
  std::vector<int> violated;  // a maximally violated subset when !member
  double excess = 0.0;        // q(violated) - rank(violated)
};

// Membership of q in the matroid polytope {0 <= q <= 1, q(S) <= rank(S)} by
// subset enumeration.
PolytopeCheck polytope_member(const Matroid& m, const FractionalPoint& q,
                              int budget = kDefaultEnumerationBudget);

// Greedy by descending weight (ties to the lower index), skipping nonpositive
// weights; optimal for matroids. Returns a sorted independent set.
std::vector<int> max_weight_independent(const Matroid& m,
                                        const std::vector<double>& w);

// R(S): the best weight of a set S' disjoint from `excluded` with
// S' u excluded independent, drawing only elements of `available` and
// weights z. `excluded` must be independent.
double remaining_value(const Matroid& m, const std::vector<double>& z,
                       const std::vector<int>& available,
                       const std::vector<int>& excluded);
double remaining_value_mask(const Matroid& m, const std::vector<double>& z,
                            std::uint32_t available, std::uint32_t excluded);

// Marginal-preserving randomized rounding of a point in the matroid polytope
// to an independent set: Pr[i in F] = q_i exactly and every F is independent.
// Construct once per (matroid, q) to reuse the rank table across draws.
class PipageSampler {
 public:
  PipageSampler(const Matroid& m, const FractionalPoint& q);
  std::vector<int> sample(std::uint64_t seed) const;

 private:
  friend std::vector<std::pair<double, std::vector<int>>> exact_dq(
      const Matroid& m, const FractionalPoint& q);

  struct Move {
    int i = -1, j = -1;
    double delta_up = 0.0, delta_dn = 0.0;
  };
  Move find_move(const std::vector<double>& y) const;
  static void apply(std::vector<double>& y, int i, int j, double delta);

  std::vector<double> q_;
  std::vector<std::uint16_t> ranks_;
};

std::vector<int> sample_feasible_set(const Matroid& m, const FractionalPoint& q,
                                     std::uint64_t seed);

// Explicit convex decomposition q = sum_k p_k * 1_{F_k} over independent
// sets, by derandomized pipage (both branches kept with their weights).
// Weights below 1e-12 are pruned and the rest renormalized. Requires n <= 12.
std::vector<std::pair<double, std::vector<int>>> exact_dq(
    const Matroid& m, const FractionalPoint& q);

}  // namespace cms
