#include "snfa/coupling.hpp"

#include <cmath>

namespace snfa {

PairSet greedy_pairs(const std::vector<std::pair<int, int>>& x) {
  PairSet T;
  std::uint32_t firsts = 0, seconds = 0;
  for (const auto& [i, j] : x) {
    const std::uint32_t fi = 1u << i, sj = 1u << j;
    if ((firsts & fi) || (seconds & sj)) continue;  // kept or conflicting
    firsts |= fi;
    seconds |= sj;
    T.push(i, j);
  }
  return T;
}

std::vector<std::pair<int, int>> sample_x(int n, int m, Rng& rng) {
  std::vector<std::pair<int, int>> x(static_cast<std::size_t>(m));
  for (auto& [i, j] : x) {
    i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    j = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  }
  return x;
}

CouplingSample sample_coupled(int n, int m, Rng& rng) {
  require(m >= 0, "sample_coupled: m >= 0");
  CouplingSample s;
  s.x = sample_x(n, m, rng);
  s.greedy_T = greedy_pairs(s.x);
  s.pi = sample_coset(n, s.greedy_T, rng);
  return s;
}

std::vector<std::pair<int, int>> correlated_x(const std::vector<std::pair<int, int>>& x,
                                              double rho, int n, Rng& rng) {
  require(rho >= 0.0 && rho <= 1.0, "correlated_x: rho in [0,1]");
  std::vector<std::pair<int, int>> y = x;
  for (auto& [i, j] : y) {
    if (!rng.bernoulli(rho)) {
      i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      j = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    }
  }
  return y;
}

namespace {

struct Accumulator {
  std::int64_t count = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double v) {
    ++count;
    sum += v;
    sumsq += v * v;
  }
  void merge(const Accumulator& o) {
    count += o.count;
    sum += o.sum;
    sumsq += o.sumsq;
  }
};

Estimate finish(const Accumulator& acc, std::uint64_t seed) {
  Estimate e;
  e.samples = acc.count;
  e.seed = seed;
  if (acc.count > 0) e.value = acc.sum / static_cast<double>(acc.count);
  if (acc.count > 1) {
    const double var =
        std::max(0.0, (acc.sumsq - acc.sum * acc.sum / static_cast<double>(acc.count)) /
                          static_cast<double>(acc.count - 1));
    e.std_error = std::sqrt(var / static_cast<double>(acc.count));
  }
  return e;
}

int effective_m(int n, const CouplingConfig& cfg) {
  return cfg.m > 0 ? cfg.m : n * n;
}

// Sample a permutation from the coset by reduced rank, avoiding the
// Permutation object in hot loops.
std::int64_t coset_sample_rank(int n, const PairSet& T, Rng& rng) {
  return rank(coset_member(
      n, T, static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(coset_size(n, T))))));
}

}  // namespace

Estimate estimate_quadratic(const SnFunction& f, const SnFunction& g, double rho,
                            std::int64_t samples, std::uint64_t seed,
                            const CouplingConfig& cfg) {
  require(f.n == g.n, "estimate_quadratic: mismatched n");
  require(samples >= 2, "estimate_quadratic: samples >= 2");
  const int n = f.n;
  const int m = effective_m(n, cfg);
  Accumulator total;
  const int streams = cfg.streams;
  for (int s = 0; s < streams; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const std::int64_t quota = samples / streams + (s < samples % streams ? 1 : 0);
    Accumulator acc;
    for (std::int64_t it = 0; it < quota; ++it) {
      const auto x = sample_x(n, m, rng);
      const std::int64_t rx = coset_sample_rank(n, greedy_pairs(x), rng);
      const auto y = correlated_x(x, rho, n, rng);
      const std::int64_t ry = coset_sample_rank(n, greedy_pairs(y), rng);
      acc.add(f[rx] * g[ry]);
    }
    total.merge(acc);
  }
  return finish(total, seed);
}

Estimate estimate_lambda(int i, double rho, int n, std::int64_t samples,
                         std::uint64_t seed, const CouplingConfig& cfg) {
  require(i >= 0 && i <= n, "estimate_lambda: 0 <= i <= n");
  PairSet T;
  for (int k = 1; k <= i; ++k) T.push(k, k);
  return estimate_lambda_at(T, rho, n, samples, seed, cfg);
}

Estimate estimate_lambda_at(const PairSet& T, double rho, int n, std::int64_t samples,
                            std::uint64_t seed, const CouplingConfig& cfg) {
  const SnFunction v = v_T(n, T);
  return estimate_quadratic(v, v, rho, samples, seed, cfg);
}

namespace {

// One conditional draw of x given sigma = pi: propose coordinates with early
// abort (an off-graph retained pair contradicts the conditioning), then
// accept with probability 1/(n - |T|)!.
bool conditional_x_given_pi(int n, int m, const Permutation& pi, Rng& rng,
                            std::int64_t cap, std::vector<std::pair<int, int>>& out) {
  for (std::int64_t attempt = 0; attempt < cap; ++attempt) {
    out.clear();
    std::uint32_t firsts = 0, seconds = 0;
    int kept = 0;
    bool ok = true;
    for (int k = 0; k < m; ++k) {
      const int i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int j = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      out.emplace_back(i, j);
      const std::uint32_t fi = 1u << i, sj = 1u << j;
      if ((firsts & fi) || (seconds & sj)) continue;
      if (pi(i) != j) {
        ok = false;  // would retain an off-graph pair
        break;
      }
      firsts |= fi;
      seconds |= sj;
      ++kept;
    }
    if (!ok) continue;
    // Remaining coordinates of the proposal are unconstrained; finish the
    // vector before the acceptance test so the draw is a complete x.
    while (static_cast<int>(out.size()) < m) {
      out.emplace_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                       1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
    }
    const double accept = 1.0 / static_cast<double>(factorial(n - kept));
    if (rng.uniform() < accept) return true;
  }
  return false;
}

}  // namespace

MomentEstimate estimate_Trho_moment(const SnFunction& f, double rho, int q,
                                    std::int64_t samples, std::uint64_t seed,
                                    const CouplingConfig& cfg) {
  require(q >= 1 && q % 2 == 0, "estimate_Trho_moment: q must be even");
  const int n = f.n;
  const int m = effective_m(n, cfg);
  MomentEstimate out;
  Accumulator total;
  std::vector<std::pair<int, int>> xc;
  for (int s = 0; s < cfg.streams; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const std::int64_t quota = samples / cfg.streams + (s < samples % cfg.streams ? 1 : 0);
    Accumulator acc;
    for (std::int64_t it = 0; it < quota; ++it) {
      // Joint draw (x0, pi); x0 is already a conditional sample given pi.
      const auto x0 = sample_x(n, m, rng);
      const Permutation pi = sample_coset(n, greedy_pairs(x0), rng);
      double prod;
      {
        const auto y = correlated_x(x0, rho, n, rng);
        prod = f[coset_sample_rank(n, greedy_pairs(y), rng)];
      }
      bool complete = true;
      for (int c = 1; c < q; ++c) {
        if (!conditional_x_given_pi(n, m, pi, rng, cfg.rejection_cap, xc)) {
          complete = false;
          break;
        }
        const auto y = correlated_x(xc, rho, n, rng);
        prod *= f[coset_sample_rank(n, greedy_pairs(y), rng)];
      }
      if (complete)
        acc.add(prod);
      else
        ++out.discarded;
    }
    total.merge(acc);
  }
  out.est = finish(total, seed);
  return out;
}

Estimate estimate_intermediate_moment(const SnFunction& f, double rho, int q,
                                      std::int64_t samples, std::uint64_t seed,
                                      const CouplingConfig& cfg) {
  require(q >= 1, "estimate_intermediate_moment: q >= 1");
  const int n = f.n;
  const int m = effective_m(n, cfg);
  Accumulator total;
  for (int s = 0; s < cfg.streams; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const std::int64_t quota = samples / cfg.streams + (s < samples % cfg.streams ? 1 : 0);
    Accumulator acc;
    for (std::int64_t it = 0; it < quota; ++it) {
      const auto y0 = sample_x(n, m, rng);
      double prod = 1.0;
      for (int c = 0; c < q; ++c) {
        const auto y = correlated_x(y0, rho, n, rng);
        prod *= f[coset_sample_rank(n, greedy_pairs(y), rng)];
      }
      acc.add(prod);
    }
    total.merge(acc);
  }
  return finish(total, seed);
}

InterpolationPoly interpolation_poly(const std::vector<double>& lambdas, int d) {
  require(d >= 1, "interpolation_poly: d >= 1");
  require(static_cast<int>(lambdas.size()) == d, "interpolation_poly: need d lambdas");
  for (double l : lambdas) require(l > 0.0, "interpolation_poly: lambdas must be positive");
  // prod_i (z/lambda_i - 1)^{9d}, expanded in z.
  std::vector<double> poly{1.0};
  for (double l : lambdas) {
    const std::vector<double> lin{-1.0, 1.0 / l};
    for (int e = 0; e < 9 * d; ++e) {
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i] += poly[i] * lin[0];
        next[i + 1] += poly[i] * lin[1];
      }
      poly = std::move(next);
    }
  }
  InterpolationPoly out;
  out.P.coeffs.assign(poly.size(), 0.0);
  for (std::size_t i = 0; i < poly.size(); ++i) out.P.coeffs[i] = -poly[i];
  out.P.coeffs[0] += 1.0;
  out.p_at_zero = out.P.coeffs[0];
  out.P0 = out.P;
  out.P0.coeffs[0] = 0.0;
  return out;
}

}  // namespace snfa
