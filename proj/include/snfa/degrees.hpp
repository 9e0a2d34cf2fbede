#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "snfa/fnspace.hpp"
#include "snfa/span_projector.hpp"

namespace snfa {

// Canonical spanning tier for V_d: one 1_T per pair *set* with |T| = t
// (positions strictly increasing, targets an ordered tuple of distinct
// values).  For t <= n-1 this tier alone spans V_t.
std::vector<PairSet> spanning_tier(int n, int t);

// Orthogonal projection f^{<= d} onto V_d = span{1_T : |T| <= d}.
// Projectors are cached per (n, d); idempotent and self-adjoint.
SnFunction project_le(const SnFunction& f, int d);
CosetFunction project_le(const CosetFunction& f, int d);

// f^{=d} = f^{<= d} - f^{<= d-1}.
SnFunction pure_part(const SnFunction& f, int d);

struct DegreeDecomposition {
  std::vector<SnFunction> parts;  // f^{=0}, ..., f^{=n-1}
};
DegreeDecomposition decompose(const SnFunction& f);

// Smallest d with ||f - f^{<= d}||_2 <= tol.
int degree_of(const SnFunction& f, double tol);

// dim V_{A,B} as the rank of the Gram matrix of {1_T : T subset of A x B
// consistent}, and the bimodule-invariance membership test of V_{A,B}.
int junta_space_dim(int n, const std::vector<int>& A, const std::vector<int>& B);
bool is_AB_junta(const SnFunction& f, const std::vector<int>& A,
                 const std::vector<int>& B, double tol = 1e-9);

// Orthonormal bases (ordinary dot product on the value tables) of V_d and of
// the pure level V_{=d}, as matrix columns.  Cached per (n, d).
std::shared_ptr<const Eigen::MatrixXd> onb_degree_le(int n, int d);
std::shared_ptr<const Eigen::MatrixXd> onb_pure_degree(int n, int d);

const SpanProjector& degree_projector(int n, int d);

// Drop caches (tests use this to bound memory).
void clear_degree_caches();

}  // namespace snfa
