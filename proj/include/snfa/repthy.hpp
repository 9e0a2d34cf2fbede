#pragma once

#include <string>
#include <vector>

#include "snfa/fnspace.hpp"

namespace snfa {

// A partition of n: weakly decreasing positive parts.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  Partition(std::initializer_list<int> p) : parts(p) { validate(); }
  explicit Partition(std::vector<int> p) : parts(std::move(p)) { validate(); }

  int n() const;
  int rows() const { return static_cast<int>(parts.size()); }
  std::string to_string() const;  // e.g. "(3,1)"
  bool operator==(const Partition& o) const = default;
  bool operator<(const Partition& o) const { return parts < o.parts; }

 private:
  void validate() const;
};

// All partitions of n in reverse-lexicographic order, (n) first.
std::vector<Partition> partitions_of(int n);

// Dominance: prefix sums of lambda >= prefix sums of mu.
bool dominates(const Partition& lambda, const Partition& mu);
Partition transpose(const Partition& lambda);
// Irreducible dimension via the hook length formula.
std::int64_t hook_dim(const Partition& lambda);

// A lambda-tabloid: an ordered partition of [n] into blocks with |A_i| =
// lambda_i, each block sorted.
using Tabloid = std::vector<std::vector<int>>;
std::vector<Tabloid> tabloids_of(const Partition& lambda);
// Indicator of T_{A,B} = { pi : pi(A_i) = B_i for all i }.
SnFunction tabloid_coset_indicator(int n, const Tabloid& A, const Tabloid& B);

// Projections onto V_lambda (span of lambda-coset indicators) and onto the
// isotypic layer V_{=lambda} = V_lambda minus the span of V_mu over all mu
// strictly dominating lambda.  Cached per (n, lambda).
SnFunction project_lambda(const SnFunction& f, const Partition& lambda);
SnFunction project_pure_lambda(const SnFunction& f, const Partition& lambda);

// Both sides of the parity twist identity (f sign)^{=lambda} = f^{=lambda^t} sign.
struct SignTwist {
  SnFunction lhs;
  SnFunction rhs;
};
SignTwist sign_twist_check(const SnFunction& f, const Partition& lambda);

// The Cayley averaging operator of a family F: (T_F f)(pi) = E_{a in F} f(pi a).
struct FamilyWalk {
  int n = 0;
  std::vector<std::int64_t> members;  // ranks, distinct

  double delta() const;  // |F| / n!
};
FamilyWalk family_walk(int n, const std::vector<std::int64_t>& members);
FamilyWalk inverse_family(const FamilyWalk& F);
SnFunction apply_TF(const FamilyWalk& F, const SnFunction& f);

// Tr(T_F^* T_F); dense operator composition for n <= 5, matrix-free
// diagonal summation otherwise.  Equals 1/delta.
double trace_TF(const FamilyWalk& F);

// (top eigenvalue of T_F^* T_F compressed to V_{=lambda}, 1/(dim(lambda) delta)).
struct EigenBound {
  double top_eigenvalue;
  double bound;
};
EigenBound eigen_bound_check(const FamilyWalk& F, const Partition& lambda);

struct HoffmanTerm {
  std::string lambda;
  double tf_g_norm;  // ||T_F g^{=lambda}||_2
  double h_norm;     // ||h^{=lambda}||_2
  double cross;      // <T_F g^{=lambda}, h^{=lambda}>
};
struct HoffmanReport {
  double inner_TFg_h;       // <T_F g, h> over S_n
  double mean_g, mean_h;    // expectations over S_n
  double mu_g, mu_h;        // densities within A_n
  double term_trivial;      // the (n) contribution, = mean_g * mean_h
  double term_sign;         // the (1^n) contribution
  double block_top;         // sum over lambda != (n),(1^n), lambda_1 >= n-3
  double block_transpose;   // sum over lambda != (n),(1^n), rows >= n-3
  double block_bulk;        // remainder
  double err3_expectation;  // sqrt(E g E h) / sqrt(n^4 delta)
  double err3_density;      // sqrt(mu_g mu_h) / (n^2 sqrt(delta))
  std::vector<HoffmanTerm> terms;
};
HoffmanReport hoffman_report(const FamilyWalk& F, const std::vector<std::int64_t>& A,
                             const std::vector<std::int64_t>& B);

bool is_product_free(const FamilyWalk& F);

// Built-in product-free families used by reports and acceptance.
FamilyWalk builtin_odd_permutations(int n);
FamilyWalk builtin_three_cycle(int n);
// { pi in A_n : pi(1) = 2, pi(2) > 2 }.
FamilyWalk builtin_shifted_window(int n);

void clear_repthy_caches();

}  // namespace snfa
