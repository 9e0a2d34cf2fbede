#pragma once

#include <cstdint>
#include <vector>

#include "snfa/fnspace.hpp"
#include "snfa/walks.hpp"

namespace snfa {

// One draw of the S_n <-> L^m coupling, L = [n]^2: x uniform on L^m,
// greedy_T the greedy consistent scan of x, pi uniform on the coset.
struct CouplingSample {
  std::vector<std::pair<int, int>> x;
  PairSet greedy_T;
  Permutation pi;
};

// Scan k = 1..m and keep (i_k, j_k) iff it stays consistent with the kept
// set (duplicates of kept pairs change nothing).
PairSet greedy_pairs(const std::vector<std::pair<int, int>>& x);

std::vector<std::pair<int, int>> sample_x(int n, int m, Rng& rng);
CouplingSample sample_coupled(int n, int m, Rng& rng);

// Coordinatewise rho-correlated copy: keep with probability rho, else
// resample uniformly from L.
std::vector<std::pair<int, int>> correlated_x(const std::vector<std::pair<int, int>>& x,
                                              double rho, int n, Rng& rng);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

struct CouplingConfig {
  int m = 0;                        // 0: default n^2
  std::int64_t rejection_cap = 1000;  // tries per conditional draw
  int streams = 64;                 // fixed logical streams for determinism
};

// Monte-Carlo estimate of <T^(rho) f, g> via the coupled pair
// (sigma_x, sigma_y): E[f(sigma_x) g(sigma_y)].
Estimate estimate_quadratic(const SnFunction& f, const SnFunction& g, double rho,
                            std::int64_t samples, std::uint64_t seed,
                            const CouplingConfig& cfg = {});

// lambda_i(rho) = <T^(rho) v_T, v_T> at the canonical T = {(1,1),...,(i,i)}.
Estimate estimate_lambda(int i, double rho, int n, std::int64_t samples,
                         std::uint64_t seed, const CouplingConfig& cfg = {});
// Same quadratic form at a caller-chosen T (the symmetry cross-check).
Estimate estimate_lambda_at(const PairSet& T, double rho, int n, std::int64_t samples,
                            std::uint64_t seed, const CouplingConfig& cfg = {});

// E[(T^(rho) f)(pi)^q] for even q via q conditionally independent coupled
// copies sharing sigma = pi; the conditional x | sigma draw uses
// coset-consistent rejection (early abort, factorial acceptance weight) with
// the configured cap.  Draws that exhaust the cap are discarded and counted;
// by symmetry the acceptance probability does not depend on pi, so the
// discard introduces no bias.
struct MomentEstimate {
  Estimate est;
  std::int64_t discarded = 0;  // outer draws abandoned at the cap
};
MomentEstimate estimate_Trho_moment(const SnFunction& f, double rho, int q,
                                    std::int64_t samples, std::uint64_t seed,
                                    const CouplingConfig& cfg = {});

// E[(T_rho T_{S_n -> L^m} f)(y)^q]: the intermediate operator of the
// coupling chain.  Since T_{L^m -> S_n} contracts every L_q norm, this
// estimates an upper bound for ||T^(rho) f||_q^q; it needs no conditional
// draws.
Estimate estimate_intermediate_moment(const SnFunction& f, double rho, int q,
                                      std::int64_t samples, std::uint64_t seed,
                                      const CouplingConfig& cfg = {});

// P(z) = 1 - prod_i (lambda_i^{-1} z - 1)^{9d} and the companion with the
// constant term removed (P0(0) = 0).
struct InterpolationPoly {
  SpectralPolynomial P;
  SpectralPolynomial P0;
  double p_at_zero;
};
InterpolationPoly interpolation_poly(const std::vector<double>& lambdas, int d);

}  // namespace snfa
