#include "snfa/rational.hpp"

#if defined(SNFA_WITH_GMP)

#include "snfa/degrees.hpp"

namespace snfa {

namespace {

using Vec = std::vector<mpq_class>;
using Mat = std::vector<std::vector<mpq_class>>;

// Exact least-squares projection of f onto the span of the level-d tier by
// Gaussian elimination on the (rational) normal equations.
Vec project_le_exact(int n, const Vec& f, int d) {
  const std::int64_t N = factorial(n);
  if (d >= n - 1) return f;
  const auto tier = spanning_tier(n, d);
  const int m = static_cast<int>(tier.size());
  std::vector<std::vector<std::int64_t>> sup(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c)
    for_each_coset(n, tier[static_cast<std::size_t>(c)],
                   [&](std::int64_t, const Permutation& pi) {
                     sup[static_cast<std::size_t>(c)].push_back(rank(pi));
                   });
  // Gram (integer intersection counts) and right-hand side.
  Mat G(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(m), 0));
  Vec b(static_cast<std::size_t>(m), 0);
  std::vector<char> mark(static_cast<std::size_t>(N), 0);
  for (int i = 0; i < m; ++i) {
    for (std::int64_t s : sup[static_cast<std::size_t>(i)]) mark[static_cast<std::size_t>(s)] = 1;
    for (int j = i; j < m; ++j) {
      std::int64_t hits = 0;
      for (std::int64_t s : sup[static_cast<std::size_t>(j)]) hits += mark[static_cast<std::size_t>(s)];
      G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = hits;
      G[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = hits;
    }
    for (std::int64_t s : sup[static_cast<std::size_t>(i)]) {
      mark[static_cast<std::size_t>(s)] = 0;
      b[static_cast<std::size_t>(i)] += f[static_cast<std::size_t>(s)];
    }
  }
  // Gaussian elimination with column pivoting; the system is consistent and
  // possibly singular, free variables are set to zero.
  std::vector<int> where(static_cast<std::size_t>(m), -1);
  int row = 0;
  for (int col = 0; col < m && row < m; ++col) {
    int sel = -1;
    for (int r = row; r < m; ++r)
      if (G[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(G[static_cast<std::size_t>(sel)], G[static_cast<std::size_t>(row)]);
    std::swap(b[static_cast<std::size_t>(sel)], b[static_cast<std::size_t>(row)]);
    const mpq_class piv = G[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    for (int r = 0; r < m; ++r) {
      if (r == row) continue;
      const mpq_class factor = G[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / piv;
      if (factor == 0) continue;
      for (int c = col; c < m; ++c)
        G[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            factor * G[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
      b[static_cast<std::size_t>(r)] -= factor * b[static_cast<std::size_t>(row)];
    }
    where[static_cast<std::size_t>(col)] = row;
    ++row;
  }
  Vec x(static_cast<std::size_t>(m), 0);
  for (int col = 0; col < m; ++col) {
    const int r = where[static_cast<std::size_t>(col)];
    if (r >= 0)
      x[static_cast<std::size_t>(col)] =
          b[static_cast<std::size_t>(r)] / G[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
  }
  Vec out(static_cast<std::size_t>(N), 0);
  for (int c = 0; c < m; ++c) {
    if (x[static_cast<std::size_t>(c)] == 0) continue;
    for (std::int64_t s : sup[static_cast<std::size_t>(c)])
      out[static_cast<std::size_t>(s)] += x[static_cast<std::size_t>(c)];
  }
  return out;
}

mpq_class dot(const Vec& a, const Vec& b) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

RationalDecomposition rational_decompose(const SnFunction& f) {
  require(f.n <= 5, "rational_decompose: intended for n <= 5");
  const int n = f.n;
  Vec fx(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) fx[i] = mpq_class(f.values[i]);

  RationalDecomposition dec;
  Vec prev = project_le_exact(n, fx, 0);
  dec.parts.push_back(prev);
  for (int d = 1; d <= n - 1; ++d) {
    Vec cur = project_le_exact(n, fx, d);
    Vec diff(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) diff[i] = cur[i] - prev[i];
    dec.parts.push_back(diff);
    prev = std::move(cur);
  }

  Vec sum(fx.size(), 0);
  mpq_class parseval = 0;
  for (const auto& part : dec.parts) {
    for (std::size_t i = 0; i < part.size(); ++i) sum[i] += part[i];
    parseval += dot(part, part);
  }
  dec.sum_exact = (sum == fx);
  dec.parseval_exact = (parseval == dot(fx, fx));
  dec.orthogonal_exact = true;
  for (std::size_t a = 0; a < dec.parts.size() && dec.orthogonal_exact; ++a)
    for (std::size_t b = a + 1; b < dec.parts.size(); ++b)
      if (dot(dec.parts[a], dec.parts[b]) != 0) {
        dec.orthogonal_exact = false;
        break;
      }
  return dec;
}

double rational_vs_double_gap(const SnFunction& f) {
  const RationalDecomposition exact = rational_decompose(f);
  const DegreeDecomposition dd = decompose(f);
  double gap = 0.0;
  for (std::size_t d = 0; d < exact.parts.size(); ++d)
    for (std::size_t i = 0; i < exact.parts[d].size(); ++i)
      gap = std::max(gap, std::fabs(dd.parts[d].values[i] - exact.parts[d][i].get_d()));
  return gap;
}

}  // namespace snfa

#endif  // SNFA_WITH_GMP
