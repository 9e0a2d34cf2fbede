#include "snfa/walks.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace snfa {

int TranspositionTables::pair_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (pairs[k].first == a && pairs[k].second == b) return static_cast<int>(k);
  throw error("pair_index: not a transposition pair");
}

const TranspositionTables& transposition_tables(int n) {
  static std::mutex mu;
  static std::map<int, TranspositionTables> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  TranspositionTables t;
  t.n = n;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) t.pairs.emplace_back(a, b);
  const std::int64_t N = factorial(n);
  t.right.assign(t.pairs.size(), std::vector<std::int32_t>(static_cast<std::size_t>(N)));
  t.left.assign(t.pairs.size(), std::vector<std::int32_t>(static_cast<std::size_t>(N)));
  std::vector<int> w(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < N; ++r) {
    const Permutation pi = unrank(n, r);
    for (std::size_t k = 0; k < t.pairs.size(); ++k) {
      const auto [a, b] = t.pairs[k];
      // pi o (a b): swap positions a and b of the word.
      w = pi.word();
      std::swap(w[static_cast<std::size_t>(a - 1)], w[static_cast<std::size_t>(b - 1)]);
      t.right[k][static_cast<std::size_t>(r)] = static_cast<std::int32_t>(rank(Permutation(w)));
      // (a b) o pi: swap the values a and b.
      w = pi.word();
      for (auto& v : w) {
        if (v == a) v = b;
        else if (v == b) v = a;
      }
      t.left[k][static_cast<std::size_t>(r)] = static_cast<std::int32_t>(rank(Permutation(w)));
    }
  }
  return cache.emplace(n, std::move(t)).first->second;
}

bool CayleyWalk::is_class_uniform() const {
  // Group weights by cycle type and check constancy over each full class.
  std::map<std::vector<int>, std::pair<double, std::int64_t>> classes;
  for (const auto& [r, w] : weights) {
    const Permutation p = unrank(n, r);
    // cycle type, sorted
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<int> type;
    for (int i = 1; i <= n; ++i) {
      if (seen[static_cast<std::size_t>(i)]) continue;
      int len = 0, j = i;
      while (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        j = p(j);
        ++len;
      }
      type.push_back(len);
    }
    std::sort(type.begin(), type.end());
    auto& e = classes[type];
    if (e.second == 0) e.first = w;
    else if (std::fabs(e.first - w) > 1e-12) return false;
    e.second += 1;
  }
  // Every touched class must be fully covered.
  for (const auto& [type, e] : classes) {
    // class size = n! / prod(type_i) / prod(mult_j!)
    std::int64_t denom = 1;
    std::map<int, int> mult;
    for (int c : type) {
      denom *= c;
      mult[c] += 1;
    }
    for (const auto& [len, m] : mult) denom *= factorial(m);
    if (e.second != factorial(n) / denom) return false;
  }
  return true;
}

CayleyWalk transposition_walk(int n) {
  require(n >= 2, "transposition_walk: need n >= 2");
  CayleyWalk W;
  W.n = n;
  const double w = 1.0 / static_cast<double>(binomial(n, 2));
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      W.weights.emplace_back(rank(Permutation::transposition(n, a, b)), w);
  return W;
}

SnFunction apply_walk(const CayleyWalk& W, const SnFunction& f) {
  require(W.n == f.n, "apply_walk: mismatched n");
  SnFunction out(f.n);
  const std::int64_t N = f.size();
  // Fast path: every generator is a transposition.
  const auto& tabs = transposition_tables(f.n);
  for (const auto& [ar, w] : W.weights) {
    const Permutation a = unrank(f.n, ar);
    int moved = 0, x = 0, y = 0;
    for (int i = 1; i <= f.n; ++i)
      if (a(i) != i) {
        ++moved;
        if (moved == 1) x = i;
        if (moved == 2) y = i;
      }
    if (moved == 2 && a(x) == y) {
      const auto& tab = tabs.left[static_cast<std::size_t>(tabs.pair_index(x, y))];
      for (std::int64_t r = 0; r < N; ++r)
        out[r] += w * f[tab[static_cast<std::size_t>(r)]];
    } else {
      for (std::int64_t r = 0; r < N; ++r)
        out[r] += w * f.at(compose(a, unrank(f.n, r)));
    }
  }
  return out;
}

SnFunction laplacian(const SnFunction& f, int i1, int i2) {
  require(i1 != i2, "laplacian: need i1 != i2");
  const auto& tabs = transposition_tables(f.n);
  const auto& tab = tabs.right[static_cast<std::size_t>(tabs.pair_index(i1, i2))];
  SnFunction out(f.n);
  for (std::int64_t r = 0; r < f.size(); ++r)
    out[r] = f[r] - f[tab[static_cast<std::size_t>(r)]];
  return out;
}

CosetFunction derivative(const SnFunction& f,
                         const std::vector<std::pair<int, int>>& lap_pairs,
                         const std::vector<std::pair<int, int>>& targets) {
  require(lap_pairs.size() == targets.size(), "derivative: pair/target mismatch");
  PairSet R;
  for (std::size_t k = 0; k < lap_pairs.size(); ++k) {
    R.push(lap_pairs[k].first, targets[k].first);
    R.push(lap_pairs[k].second, targets[k].second);
  }
  require(is_consistent(R), "derivative: inconsistent resulting restriction");
  const auto& tabs = transposition_tables(f.n);
  const int t = static_cast<int>(lap_pairs.size());
  CosetFunction out;
  out.base_n = f.n;
  out.T = R;
  out.values.resize(static_cast<std::size_t>(coset_size(f.n, R)));
  std::vector<const std::vector<std::int32_t>*> tabl;
  for (const auto& [a, b] : lap_pairs)
    tabl.push_back(&tabs.right[static_cast<std::size_t>(tabs.pair_index(a, b))]);
  for_each_coset(f.n, R, [&](std::int64_t k, const Permutation& pi) {
    double acc = 0.0;
    const auto base = static_cast<std::int32_t>(rank(pi));
    for (int mask = 0; mask < (1 << t); ++mask) {
      std::int32_t r = base;
      int bits = 0;
      for (int q = 0; q < t; ++q)
        if (mask & (1 << q)) {
          r = (*tabl[static_cast<std::size_t>(q)])[static_cast<std::size_t>(r)];
          ++bits;
        }
      acc += ((bits % 2 == 0) ? 1.0 : -1.0) * f[r];
    }
    out.values[static_cast<std::size_t>(k)] = acc;
  });
  return out;
}

double SpectralPolynomial::eval(double z) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

double SpectralPolynomial::spectral_norm() const {
  double s = 0.0;
  for (double c : coeffs) s += std::fabs(c);
  return s;
}

SnFunction spectral_apply_iterative(const SpectralPolynomial& P, const CayleyWalk& W,
                                    const SnFunction& f) {
  SnFunction acc(f.n);
  SnFunction power = f;
  for (std::size_t i = 0; i < P.coeffs.size(); ++i) {
    if (i > 0) power = apply_walk(W, power);
    if (P.coeffs[i] != 0.0) acc = acc + P.coeffs[i] * power;
  }
  return acc;
}

namespace {
struct WalkEigenbasis {
  // Per degree level: expectation-orthonormal eigenvectors and eigenvalues.
  std::vector<Eigen::MatrixXd> vectors;
  std::vector<Eigen::VectorXd> values;
};

WalkEigenbasis walk_eigenbasis(const CayleyWalk& W, int n) {
  WalkEigenbasis eb;
  for (int d = 0; d <= n - 1; ++d) {
    const auto Q = onb_pure_degree(n, d);
    const auto m = Q->cols();
    Eigen::MatrixXd WQ(Q->rows(), m);
    for (Eigen::Index c = 0; c < m; ++c) {
      SnFunction col(n);
      for (Eigen::Index r = 0; r < Q->rows(); ++r) col[r] = (*Q)(r, c);
      const SnFunction img = apply_walk(W, col);
      for (Eigen::Index r = 0; r < Q->rows(); ++r) WQ(r, c) = img[r];
    }
    Eigen::MatrixXd A = Q->transpose() * WQ;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
    eb.vectors.push_back(*Q * es.eigenvectors());
    eb.values.push_back(es.eigenvalues());
  }
  return eb;
}
}  // namespace

SnFunction spectral_apply_eigen(const SpectralPolynomial& P, const CayleyWalk& W,
                                const SnFunction& f) {
  require(W.is_class_uniform(),
          "spectral_apply_eigen: walk must be class-uniform (degree preserving, symmetric)");
  const WalkEigenbasis eb = walk_eigenbasis(W, f.n);
  Eigen::VectorXd fv(f.size());
  for (std::int64_t r = 0; r < f.size(); ++r) fv(r) = f[r];
  SnFunction out(f.n);
  for (std::size_t lvl = 0; lvl < eb.vectors.size(); ++lvl) {
    const Eigen::VectorXd coords = eb.vectors[lvl].transpose() * fv;
    for (Eigen::Index c = 0; c < coords.size(); ++c) {
      const double scale = P.eval(eb.values[lvl](c)) * coords(c);
      if (scale == 0.0) continue;
      for (std::int64_t r = 0; r < f.size(); ++r)
        out[r] += scale * eb.vectors[lvl](r, c);
    }
  }
  return out;
}

SnFunction spectral_apply(const SpectralPolynomial& P, const CayleyWalk& W,
                          const SnFunction& f) {
  return spectral_apply_iterative(P, W, f);
}

SnFunction poisson_apply(const SnFunction& f, double t) {
  require(t >= 0.0, "poisson_apply: t >= 0");
  const CayleyWalk W = transposition_walk(f.n);
  // e^{-t} sum t^k/k! T^k f, truncated once the raw tail is below 1e-12.
  int K = 0;
  {
    double term = 1.0, tail_bound;  // term = t^K / K!
    do {
      ++K;
      term = term * t / K;
      // Geometric tail bound: sum_{k>K} t^k/k! <= t^{K+1}/(K+1)! / (1 - t/(K+2)).
      tail_bound = (t < K + 2) ? term * t / (K + 1) / (1.0 - t / (K + 2)) : 1.0;
    } while (tail_bound > 1e-12 && K < 10000);
  }
  SnFunction acc(f.n);
  SnFunction power = f;
  double coef = std::exp(-t);
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      power = apply_walk(W, power);
      coef = coef * t / k;
    }
    if (coef != 0.0) acc = acc + coef * power;
  }
  return acc;
}

std::vector<double> eigen_by_degree(const CayleyWalk& W, int n, int d) {
  require(W.is_class_uniform(),
          "eigen_by_degree: walk must be class-uniform (degree preserving)");
  const auto Q = onb_pure_degree(n, d);
  const auto m = Q->cols();
  Eigen::MatrixXd WQ(Q->rows(), m);
  for (Eigen::Index c = 0; c < m; ++c) {
    SnFunction col(n);
    for (Eigen::Index r = 0; r < Q->rows(); ++r) col[r] = (*Q)(r, c);
    const SnFunction img = apply_walk(W, col);
    for (Eigen::Index r = 0; r < Q->rows(); ++r) WQ(r, c) = img[r];
  }
  Eigen::MatrixXd A = Q->transpose() * WQ;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()),
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<SpectrumRow> walk_spectrum(const CayleyWalk& W, int n, int d_max,
                                       double cluster_tol) {
  std::vector<SpectrumRow> rows;
  for (int d = 0; d <= d_max; ++d) {
    const auto ev = eigen_by_degree(W, n, d);
    std::size_t i = 0;
    while (i < ev.size()) {
      std::size_t j = i;
      while (j + 1 < ev.size() && ev[j + 1] - ev[i] <= cluster_tol) ++j;
      rows.push_back({d, ev[(i + j) / 2], static_cast<int>(j - i + 1)});
      i = j + 1;
    }
  }
  return rows;
}

double influence(const SnFunction& f, int i) {
  require(i >= 1 && i <= f.n, "influence: coordinate range");
  double acc = 0.0;
  for (int j = 1; j <= f.n; ++j) {
    if (j == i) continue;
    acc += norm2_sq(laplacian(f, i, j));
  }
  return acc / static_cast<double>(f.n - 1);
}

double total_influence(const SnFunction& f) {
  double acc = 0.0;
  for (int i = 1; i <= f.n; ++i) acc += influence(f, i);
  return acc;
}

PairSet step_restriction(const CayleyWalk& M, const PairSet& T, std::int64_t gen_rank) {
  const Permutation a = unrank(M.n, gen_rank);
  PairSet Tp;
  for (const auto& [i, j] : T.pairs) Tp.push(i, a(j));
  return Tp;
}

std::vector<std::pair<PairSet, double>> transition_support(const CayleyWalk& M,
                                                           const PairSet& T) {
  std::vector<std::pair<PairSet, double>> out;
  for (const auto& [ar, w] : M.weights) {
    const PairSet Tp = step_restriction(M, T, ar);
    bool found = false;
    for (auto& [S, ws] : out) {
      if (S.set_equal(Tp)) {
        ws += w;
        found = true;
        break;
      }
    }
    if (!found) out.emplace_back(Tp, w);
  }
  return out;
}

PairSet restriction_transition(const CayleyWalk& M, const PairSet& T, Rng& rng) {
  require(is_consistent(T), "restriction_transition: inconsistent T");
  // One walk step from a uniform element of the coset; T' depends only on
  // the generator, so sampling the generator suffices.
  double u = rng.uniform();
  for (const auto& [ar, w] : M.weights) {
    u -= w;
    if (u <= 0.0) return step_restriction(M, T, ar);
  }
  return step_restriction(M, T, M.weights.back().first);
}

bool compatible(const CayleyWalk& M, const PairSet& T, const PairSet& Tp) {
  for (const auto& [ar, w] : M.weights)
    if (w > 0.0 && step_restriction(M, T, ar).set_equal(Tp)) return true;
  return false;
}

CosetFunction coset_transfer(const CayleyWalk& M, const PairSet& Tp, const PairSet& T,
                             const CosetFunction& g) {
  require(g.base_n == M.n, "coset_transfer: mismatched n");
  require(g.T.set_equal(Tp), "coset_transfer: g not on S^{T'}");
  require(is_consistent(T) && is_consistent(Tp), "coset_transfer: inconsistent T");
  // (W_{T'->T} g)(pi) = E_{a | T'(a) = T'} [ g(a o pi) ], pi in S^T.
  std::vector<std::pair<std::int64_t, double>> gens;
  double total = 0.0;
  for (const auto& [ar, w] : M.weights) {
    if (w > 0.0 && step_restriction(M, T, ar).set_equal(Tp)) {
      gens.emplace_back(ar, w);
      total += w;
    }
  }
  require(!gens.empty(), "coset_transfer: M is not compatible with (T, T')");
  CosetFunction out;
  out.base_n = M.n;
  out.T = T;
  out.values.assign(static_cast<std::size_t>(coset_size(M.n, T)), 0.0);
  for_each_coset(M.n, T, [&](std::int64_t k, const Permutation& pi) {
    double acc = 0.0;
    for (const auto& [ar, w] : gens) {
      const Permutation api = compose(unrank(M.n, ar), pi);
      acc += w * g.values[static_cast<std::size_t>(coset_reduced_rank(M.n, g.T, api))];
    }
    out.values[static_cast<std::size_t>(k)] = acc / total;
  });
  return out;
}

namespace {
// Multiply extended-precision coefficient arrays, flagging overflow.
std::vector<long double> poly_mul(const std::vector<long double>& a,
                                  const std::vector<long double>& b, bool& overflow) {
  std::vector<long double> c(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0L) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  for (long double v : c)
    if (std::isnan(v) || std::isinf(v)) overflow = true;
  return c;
}

std::vector<long double> poly_pow(std::vector<long double> base, int e, bool& overflow) {
  std::vector<long double> acc{1.0L};
  while (e > 0) {
    if (e & 1) acc = poly_mul(acc, base, overflow);
    e >>= 1;
    if (e > 0) base = poly_mul(base, base, overflow);
  }
  return acc;
}
}  // namespace

long double DegreeLoweringPoly::eval(double z) const {
  // Q(z) via the defining product, evaluated in long double.
  const long double zn = std::pow(static_cast<long double>(z), n);
  long double q = 0.0L;
  for (int i = 1; i <= d; ++i) {
    long double prod = 1.0L;
    for (int j = 1; j <= 4 * d; ++j) {
      if (j == i) continue;
      const long double num = zn - std::exp(static_cast<long double>(-2.0L * j));
      const long double den = std::exp(static_cast<long double>(-2.0L * i)) -
                              std::exp(static_cast<long double>(-2.0L * j));
      prod *= std::pow(num / den, static_cast<long double>(20 * d));
    }
    q += prod;
  }
  return 1.0L - std::pow(1.0L - q, static_cast<long double>(20 * d));
}

DegreeLoweringPoly degree_lowering_poly(int n, int d) {
  require(d >= 1, "degree_lowering_poly: d >= 1");
  DegreeLoweringPoly P;
  P.n = n;
  P.d = d;
  bool overflow = false;
  // Q as a polynomial in w = z^n.
  std::vector<long double> Q{0.0L};
  for (int i = 1; i <= d; ++i) {
    std::vector<long double> prod{1.0L};
    for (int j = 1; j <= 4 * d; ++j) {
      if (j == i) continue;
      const long double den = std::exp(static_cast<long double>(-2.0L * i)) -
                              std::exp(static_cast<long double>(-2.0L * j));
      std::vector<long double> lin{-std::exp(static_cast<long double>(-2.0L * j)) / den,
                                   1.0L / den};
      prod = poly_mul(prod, poly_pow(lin, 20 * d, overflow), overflow);
    }
    if (prod.size() > Q.size()) Q.resize(prod.size(), 0.0L);
    for (std::size_t k = 0; k < prod.size(); ++k) Q[k] += prod[k];
  }
  // P = 1 - (1 - Q)^{20d}.
  std::vector<long double> one_minus_Q = Q;
  for (auto& v : one_minus_Q) v = -v;
  one_minus_Q[0] += 1.0L;
  std::vector<long double> pw = poly_pow(one_minus_Q, 20 * d, overflow);
  for (auto& v : pw) v = -v;
  pw[0] += 1.0L;
  P.coeff_overflow = overflow;
  long double norm = 0.0L;
  for (long double v : pw) norm += std::fabs(v);
  P.spectral_norm = norm;
  if (!overflow) {
    // Spread the w-coefficients onto powers of z (w = z^n).
    P.coeffs.assign((pw.size() - 1) * static_cast<std::size_t>(n) + 1, 0.0L);
    for (std::size_t k = 0; k < pw.size(); ++k)
      P.coeffs[k * static_cast<std::size_t>(n)] = pw[k];
  }
  return P;
}

}  // namespace snfa
