#pragma once

#include <cstdint>
#include <vector>

#include "snfa/fnspace.hpp"

namespace snfa {

// The multi-slice U_{k_1,...,k_m}: vectors in [m]^n with prescribed color
// counts.  Ranking follows the combinatorial number system extended to
// multinomials: scanning positions left to right, a vector with color c at
// the current position is preceded by all completions placing a smaller
// color there (with positive remaining count).
struct MultiSlice {
  int n = 0;
  std::vector<int> counts;  // k_1,...,k_m, sum = n

  int colors() const { return static_cast<int>(counts.size()); }
  std::int64_t size() const;  // multinomial(n; k_1..k_m)
};

std::int64_t multinomial(const std::vector<int>& counts);
std::int64_t ms_rank(const MultiSlice& U, const std::vector<int>& x);
std::vector<int> ms_unrank(const MultiSlice& U, std::int64_t r);

struct MultiSliceFunction {
  MultiSlice slice;
  std::vector<double> values;

  MultiSliceFunction() = default;
  explicit MultiSliceFunction(MultiSlice U, double fill = 0.0);
  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
};

double mean(const MultiSliceFunction& h);
double norm_q(const MultiSliceFunction& h, double q);
double norm2(const MultiSliceFunction& h);
double norm2_sq(const MultiSliceFunction& h);
double inner(const MultiSliceFunction& a, const MultiSliceFunction& b);
double variance(const MultiSliceFunction& h);

// Deterministic lift M through the block coupling: x_i = j iff pi(i) in K_j;
// (M h)(pi) = h(C(pi)).  blocks must partition [n] with |K_j| = k_j.
SnFunction lift(const MultiSliceFunction& h, const std::vector<std::vector<int>>& blocks);
// Canonical blocks: K_1 = {1..k_1}, K_2 = next k_2 values, ...
std::vector<std::vector<int>> canonical_blocks(const MultiSlice& U);

// Degree structure: V_d(U) is spanned by the indicators 1_{x_A = alpha},
// |A| <= d.  Projections are cached per slice and degree.
MultiSliceFunction ms_project_le(const MultiSliceFunction& h, int d);
MultiSliceFunction ms_pure(const MultiSliceFunction& h, int d);

// Restriction h_{A -> alpha} on the reduced multi-slice.
MultiSliceFunction ms_restrict(const MultiSliceFunction& h, const std::vector<int>& A,
                               const std::vector<int>& alpha);

struct MsProfileRow {
  int t;
  double max_norm;
  std::vector<int> argmax_A;
  std::vector<int> argmax_alpha;
};
std::vector<MsProfileRow> ms_globalness(const MultiSliceFunction& h, int d);

double ms_influence(const MultiSliceFunction& h, int i);
double ms_total_influence(const MultiSliceFunction& h);

// ----------------------------------------------------------------------
// Set families in ([n] choose k), stored as sorted bitmasks, and the
// Kruskal--Katona machinery of the slice.
// ----------------------------------------------------------------------
struct SetFamily {
  int n = 0;
  int k = 0;
  std::vector<std::uint32_t> members;  // sorted distinct bitmasks of popcount k

  std::int64_t layer_size() const { return binomial(n, k); }
  double measure() const {
    return static_cast<double>(members.size()) / static_cast<double>(layer_size());
  }
};

SetFamily make_family(int n, int k, std::vector<std::uint32_t> members);
// Upper shadow: all (k+1)-sets containing a member.
SetFamily shadow_up(const SetFamily& F);

// Indicator of F on the two-color multi-slice U_{k, n-k} (color 1 = inside).
MultiSliceFunction family_indicator(const SetFamily& F);

// Generalized binomial C(y, j) = y (y-1) ... (y-j+1) / j! for real y, and
// the inverse: the y >= j-1 with C(y, j) = target (monotone bisection).
double gen_binomial(double y, int j);
double lovasz_parameter(int j, double target);

// The Lovasz-form bound: writing |F| = C(y, n-k), the upper shadow has at
// least C(y, n-k-1) members (lower-shadow form applied to complements).
struct LovaszBound {
  double y;
  double bound;        // lower bound for |F up|
  std::int64_t shadow; // actual |F up|
  bool holds;
};
LovaszBound kruskal_katona_check(const SetFamily& F);

// (mu(F up), mu(F)^2 / <f, M* M f>) for the raising operator M.
struct RaisingBound {
  double mu_up;
  double quad;   // <f, M* M f> = ||M f||_2^2
  double bound;  // mu(F)^2 / quad
  bool holds;
};
RaisingBound raising_quadratic(const SetFamily& F);

// Both sides of the walk identity
// P[x in F, y not in F] = k/(k+1) * n(n-1)/(2k(n-k)) * 1/(2n) * I[1_F].
struct KkWalkIdentity {
  double lhs;
  double rhs;
};
KkWalkIdentity kk_walk_identity(const SetFamily& F);

// File format: one subset per line, sorted comma-separated integers.
void write_family_file(const SetFamily& F, const std::string& path);
SetFamily read_family_file(int n, int k, const std::string& path);

void clear_multislice_caches();

}  // namespace snfa
