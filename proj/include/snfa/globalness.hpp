#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snfa/fnspace.hpp"

namespace snfa {

struct RestrictionRow {
  int t;
  double max_norm;
  PairSet argmax;  // lexicographically least maximizer, canonical order
};

struct DerivativeRow {
  int t;
  double max_norm;
  std::vector<std::pair<int, int>> argmax_pairs;    // Laplacian position pairs
  std::vector<std::pair<int, int>> argmax_targets;  // their value targets
};

struct GlobalnessReport {
  std::vector<RestrictionRow> restriction;
  std::vector<DerivativeRow> derivative;
  // Least eps and C fits: eps = ||f||_2 (the t=0 entry), C the smallest
  // constant with max_norm(t) <= C^t eps over the covered sizes.
  double eps_fit = 0.0;
  double c_fit = 0.0;
};

// Exact max over all consistent T of each size <= t_max of ||f_{->T}||_2.
GlobalnessReport restriction_profile(const SnFunction& f, int t_max);

// Exact max of ||D f||_2 over all derivatives of each order <= t_max.
GlobalnessReport derivative_profile(const SnFunction& f, int t_max);

// ||f_{->T}||_2 <= C^{|T|} eps for all consistent T with |T| <= t_max.
// partial is set when t_max < n (the certificate does not cover all sizes).
bool is_global_with_constant(const SnFunction& f, double eps, double C, int t_max,
                             bool* partial = nullptr);

struct InfinityBoundReport {
  double lhs;          // ||f||_inf
  double rhs;          // sqrt((6d)!) 4^{3n} eps
  bool holds;
  bool vacuous;        // precondition failed: f not (2d,eps)-global of degree d
  double profile_max;  // measured max restriction norm up to size 2d
  int measured_degree;
};
InfinityBoundReport infinity_bound_check(const SnFunction& f, int d, double eps);

struct LowDegreeGlobalnessReport {
  bool integer_valued;
  std::vector<RestrictionRow> truncation_profile;  // profile of f^{<= j}
  std::vector<RestrictionRow> base_profile;        // profile of f
};
LowDegreeGlobalnessReport low_degree_globalness(const SnFunction& f, int j);

// Enumerate order-t derivatives: t disjoint position pairs (a_r < b_r,
// a_1 < a_2 < ...) with ordered distinct targets (c_r, d_r).
void enumerate_derivatives(
    int n, int t,
    const std::function<void(const std::vector<std::pair<int, int>>&,
                             const std::vector<std::pair<int, int>>&)>& fn);

}  // namespace snfa
