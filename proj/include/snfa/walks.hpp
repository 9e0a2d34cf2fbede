#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "snfa/degrees.hpp"
#include "snfa/fnspace.hpp"

namespace snfa {

// Ranks of pi o (a b) and (a b) o pi for every transposition, cached per n.
// Right multiplication swaps the two positions of the word; left
// multiplication swaps the two values.
struct TranspositionTables {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;  // (a, b), a < b
  std::vector<std::vector<std::int32_t>> right;
  std::vector<std::vector<std::int32_t>> left;

  int pair_index(int a, int b) const;
};
const TranspositionTables& transposition_tables(int n);

// A right-invariant Markov operator given by a probability weighting of
// group elements, applied by left multiplication:
//   (W f)(pi) = sum_a weight(a) f(a o pi).
struct CayleyWalk {
  int n = 0;
  std::vector<std::pair<std::int64_t, double>> weights;  // (rank of a, w)

  // Constant on conjugacy classes (implies a symmetric transition matrix).
  bool is_class_uniform() const;
};

// Uniform weight on the C(n,2) transpositions.
CayleyWalk transposition_walk(int n);

SnFunction apply_walk(const CayleyWalk& W, const SnFunction& f);

// L_{(i1,i2)} f = f - f^{(i1 i2)}.
SnFunction laplacian(const SnFunction& f, int i1, int i2);

// Order-t derivative: Laplacians along position pairs (a_r, b_r) followed by
// the restriction {(a_r, c_r), (b_r, d_r)}_r.  Order 0 is the identity.
CosetFunction derivative(const SnFunction& f,
                         const std::vector<std::pair<int, int>>& lap_pairs,
                         const std::vector<std::pair<int, int>>& targets);

struct SpectralPolynomial {
  std::vector<double> coeffs;  // P(z) = sum coeffs[i] z^i

  double eval(double z) const;
  double spectral_norm() const;  // sum |a_i|
};

// P(W) f.  The iterative route applies the walk repeatedly; the eigen route
// expands f in a walk eigenbasis per degree level (requires a class-uniform
// walk) and multiplies by P(lambda).
SnFunction spectral_apply_iterative(const SpectralPolynomial& P, const CayleyWalk& W,
                                    const SnFunction& f);
SnFunction spectral_apply_eigen(const SpectralPolynomial& P, const CayleyWalk& W,
                                const SnFunction& f);
SnFunction spectral_apply(const SpectralPolynomial& P, const CayleyWalk& W,
                          const SnFunction& f);

// e^{-t(I - T)} f for the transposition walk T, by truncated exponential
// series with raw tail bound sum_{k>K} t^k / k! <= 1e-12.
SnFunction poisson_apply(const SnFunction& f, double t);

// Eigenvalues (ascending, with multiplicity) of the walk compressed to the
// pure level V_{=d}.
std::vector<double> eigen_by_degree(const CayleyWalk& W, int n, int d);

struct SpectrumRow {
  int degree;
  double eigenvalue;
  int multiplicity;
};
// Clustered walk spectrum rows for degrees 0..d_max.
std::vector<SpectrumRow> walk_spectrum(const CayleyWalk& W, int n, int d_max,
                                       double cluster_tol = 1e-8);

// I_i[f] = E_{j != i} ||L_{(i,j)} f||_2^2 and I[f] = sum_i I_i[f].
double influence(const SnFunction& f, int i);
double total_influence(const SnFunction& f);

// Restriction-transition machinery.  From T, one walk step induces
// T'(a) = {(i_k, a(j_k))}; N(T) is the pushforward of the walk weights.
PairSet step_restriction(const CayleyWalk& M, const PairSet& T, std::int64_t gen_rank);
std::vector<std::pair<PairSet, double>> transition_support(const CayleyWalk& M,
                                                           const PairSet& T);
PairSet restriction_transition(const CayleyWalk& M, const PairSet& T, Rng& rng);
bool compatible(const CayleyWalk& M, const PairSet& T, const PairSet& Tp);
// The conditional-averaging transfer operator M_{S^{T'} -> S^T} applied to g.
CosetFunction coset_transfer(const CayleyWalk& M, const PairSet& Tp, const PairSet& T,
                             const CosetFunction& g);

// The polynomial P(z) = 1 - (1 - Q(z))^{20d} with
// Q(z) = sum_{i<=d} prod_{j in [4d]\{i}} ((z^n - e^{-2j})/(e^{-2i} - e^{-2j}))^{20d}.
// Coefficients are expanded in extended precision purely for the spectral
// norm report; evaluation always goes through the stable product form.
struct DegreeLoweringPoly {
  int n = 0;
  int d = 0;
  std::vector<long double> coeffs;  // in z; may be empty if overflowed
  bool coeff_overflow = false;
  long double spectral_norm = 0.0L;  // sum |a_i| (long double range)

  // Stable product-form evaluation (extended range: values explode at
  // eigenvalues whose level the construction does not pin).
  long double eval(double z) const;
};
DegreeLoweringPoly degree_lowering_poly(int n, int d);

}  // namespace snfa
