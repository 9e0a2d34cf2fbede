#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace snfa {

// Exact tables only fit memory up to 10! values.
inline constexpr int kMaxN = 10;

std::int64_t factorial(int n);

// n * (n-1) * ... * (n-k+1), the number of ordered k-tuples of distinct
// elements of [n].
std::int64_t falling_factorial(int n, int k);

std::int64_t binomial(int n, int k);

// --------------------------------------------------------------------------
// Deterministic random source.
//
// xoshiro256** seeded through SplitMix64.  All bounded sampling is done with
// rejection on the raw 64-bit stream, so results are identical across
// platforms and standard-library versions.  Independent streams are derived
// from (seed, stream index); the harness assigns one stream per logical
// worker slot regardless of the actual thread count.
// --------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);

  // Uniform in [0, 1).
  double uniform();

  // Standard normal via Box-Muller (two uniforms per pair, spare cached).
  double normal();

  bool bernoulli(double p);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Pairwise (tree) summation: deterministic, order-independent accuracy.
double pairwise_sum(const double* data, std::size_t len);
double pairwise_sum(const std::vector<double>& v);

// --------------------------------------------------------------------------
// Ordered tuples of distinct elements of [n] = {1,...,n}, in lexicographic
// order.  rank/unrank are mutually inverse over [0, falling_factorial(n,k)).
// --------------------------------------------------------------------------
std::vector<int> unrank_tuple(int n, int k, std::int64_t r);
std::int64_t rank_tuple(int n, const std::vector<int>& tuple);

// Upper tail Q(s, x) = P[Chi2_dof > x] support: regularized incomplete gamma.
double gamma_q(double s, double x);
double chi2_tail(double dof, double x);

struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const char* what) {
  if (!cond) throw error(what);
}

}  // namespace snfa
