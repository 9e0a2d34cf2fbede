#include "snfa/normrep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "snfa/degrees.hpp"

namespace snfa {

namespace {

// All ordered k-tuples of distinct values, by rank.
std::vector<std::vector<int>> all_tuples(int n, int k) {
  const std::int64_t m = falling_factorial(n, k);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(m));
  for (std::int64_t r = 0; r < m; ++r) out[static_cast<std::size_t>(r)] = unrank_tuple(n, k, r);
  return out;
}

std::size_t table_index(std::int64_t nI, std::int64_t rI, std::int64_t rJ) {
  return static_cast<std::size_t>(rI * nI + rJ);
}

// action[pi_rank * n_k + rank(I)] = rank of pi(I); shared by the evaluator
// and the minimum-norm solver.
const std::vector<std::int32_t>& tuple_action_table(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::int32_t>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, k});
  if (it != cache.end()) return it->second;
  const std::int64_t N = factorial(n);
  const std::int64_t nk = falling_factorial(n, k);
  const auto tuples = all_tuples(n, k);
  std::vector<std::int32_t> tab(static_cast<std::size_t>(N * nk));
  std::vector<int> J(static_cast<std::size_t>(k));
  for (std::int64_t p = 0; p < N; ++p) {
    const Permutation pi = unrank(n, p);
    for (std::int64_t rI = 0; rI < nk; ++rI) {
      const auto& I = tuples[static_cast<std::size_t>(rI)];
      for (int q = 0; q < k; ++q) J[static_cast<std::size_t>(q)] = pi(I[static_cast<std::size_t>(q)]);
      tab[static_cast<std::size_t>(p * nk + rI)] = static_cast<std::int32_t>(rank_tuple(n, J));
    }
  }
  return cache.emplace(std::make_pair(n, k), std::move(tab)).first->second;
}

}  // namespace

NormalizedRep operator+(const NormalizedRep& a, const NormalizedRep& b) {
  require(a.n == b.n, "NormalizedRep +: mismatched n");
  NormalizedRep out = a;
  if (b.levels.size() > out.levels.size()) out.levels.resize(b.levels.size());
  for (std::size_t k = 0; k < b.levels.size(); ++k) {
    if (out.levels[k].size() < b.levels[k].size()) out.levels[k].resize(b.levels[k].size(), 0.0);
    for (std::size_t i = 0; i < b.levels[k].size(); ++i) out.levels[k][i] += b.levels[k][i];
  }
  return out;
}

NormalizedRep operator*(double c, const NormalizedRep& rep) {
  NormalizedRep out = rep;
  for (auto& lvl : out.levels)
    for (auto& v : lvl) v *= c;
  return out;
}

SnFunction evaluate_level(const NormalizedRep& rep, int k) {
  SnFunction out(rep.n);
  if (k > rep.top_level() || rep.levels[static_cast<std::size_t>(k)].empty()) return out;
  const auto& table = rep.levels[static_cast<std::size_t>(k)];
  if (k == 0) {
    for (auto& v : out.values) v = table[0];
    return out;
  }
  const std::int64_t nk = falling_factorial(rep.n, k);
  const auto& act = tuple_action_table(rep.n, k);
  for (std::int64_t r = 0; r < out.size(); ++r) {
    double acc = 0.0;
    const std::int32_t* row = act.data() + r * nk;
    for (std::int64_t rI = 0; rI < nk; ++rI)
      acc += table[table_index(nk, rI, row[rI])];
    out[r] = acc;
  }
  return out;
}

SnFunction evaluate(const NormalizedRep& rep) {
  SnFunction out(rep.n);
  for (int k = 0; k <= rep.top_level(); ++k) out = out + evaluate_level(rep, k);
  return out;
}

namespace {

// Minimum-Euclidean-norm coefficients over the ordered level-t spanning set
// representing r exactly: a = M^T y with (M M^T) y = r, solved by conjugate
// gradients on the (consistent, PSD) normal system.  The system matrix has
// the closed form (M M^T)[pi,sigma] = falling(agree(pi,sigma), t).
std::vector<double> min_norm_level_solve(int n, int t, const std::vector<double>& r) {
  const std::int64_t N = factorial(n);
  const std::int64_t nt = falling_factorial(n, t);
  const auto& act = tuple_action_table(n, t);

  const auto apply_Mt = [&](const std::vector<double>& y) {
    std::vector<double> u(static_cast<std::size_t>(nt * nt), 0.0);
    for (std::int64_t p = 0; p < N; ++p) {
      const double yp = y[static_cast<std::size_t>(p)];
      if (yp == 0.0) continue;
      const std::int32_t* row = act.data() + p * nt;
      for (std::int64_t rI = 0; rI < nt; ++rI) u[table_index(nt, rI, row[rI])] += yp;
    }
    return u;
  };
  const auto apply_M = [&](const std::vector<double>& a) {
    std::vector<double> v(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t p = 0; p < N; ++p) {
      double acc = 0.0;
      const std::int32_t* row = act.data() + p * nt;
      for (std::int64_t rI = 0; rI < nt; ++rI) acc += a[table_index(nt, rI, row[rI])];
      v[static_cast<std::size_t>(p)] = acc;
    }
    return v;
  };

  // CG from zero on (M M^T) y = r.
  std::vector<double> y(static_cast<std::size_t>(N), 0.0);
  std::vector<double> res = r, p = r;
  double rho = 0.0;
  for (double v : res) rho += v * v;
  const double rho0 = rho;
  for (int it = 0; it < 2000 && rho > 1e-26 * std::max(1.0, rho0); ++it) {
    const std::vector<double> Ap = apply_M(apply_Mt(p));
    double pAp = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) pAp += p[i] * Ap[i];
    if (pAp <= 0.0) break;
    const double alpha = rho / pAp;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += alpha * p[i];
      res[i] -= alpha * Ap[i];
    }
    double rho_new = 0.0;
    for (double v : res) rho_new += v * v;
    const double beta = rho_new / rho;
    rho = rho_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = res[i] + beta * p[i];
  }
  return apply_Mt(y);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

struct LevelFrame {
  int n, t;
  std::int64_t nt;
  std::vector<std::vector<int>> tuples;
};

// Row relation residual: for each slot r, fixing J and I minus slot r, the
// sum over the free entry must vanish.
double row_violation(const LevelFrame& fr, const std::vector<double>& a, int slot) {
  double worst = 0.0;
  std::vector<int> I;
  for (std::int64_t rI = 0; rI < fr.nt; ++rI) {
    const auto& base = fr.tuples[static_cast<std::size_t>(rI)];
    // Only visit representatives where the free slot holds the smallest
    // admissible value, to avoid rescanning the same family.
    bool representative = true;
    for (int v = 1; v < base[static_cast<std::size_t>(slot)]; ++v) {
      bool used = false;
      for (int q = 0; q < fr.t; ++q)
        if (q != slot && base[static_cast<std::size_t>(q)] == v) used = true;
      if (!used) {
        representative = false;
        break;
      }
    }
    if (!representative) continue;
    for (std::int64_t rJ = 0; rJ < fr.nt; ++rJ) {
      double sum = 0.0;
      I = base;
      for (int v = 1; v <= fr.n; ++v) {
        bool used = false;
        for (int q = 0; q < fr.t; ++q)
          if (q != slot && base[static_cast<std::size_t>(q)] == v) used = true;
        if (used) continue;
        I[static_cast<std::size_t>(slot)] = v;
        sum += a[table_index(fr.nt, rank_tuple(fr.n, I), rJ)];
      }
      worst = std::max(worst, std::fabs(sum));
    }
  }
  return worst;
}

double column_violation(const LevelFrame& fr, const std::vector<double>& a, int slot) {
  double worst = 0.0;
  std::vector<int> J;
  for (std::int64_t rJ = 0; rJ < fr.nt; ++rJ) {
    const auto& base = fr.tuples[static_cast<std::size_t>(rJ)];
    bool representative = true;
    for (int v = 1; v < base[static_cast<std::size_t>(slot)]; ++v) {
      bool used = false;
      for (int q = 0; q < fr.t; ++q)
        if (q != slot && base[static_cast<std::size_t>(q)] == v) used = true;
      if (!used) {
        representative = false;
        break;
      }
    }
    if (!representative) continue;
    for (std::int64_t rI = 0; rI < fr.nt; ++rI) {
      double sum = 0.0;
      J = base;
      for (int v = 1; v <= fr.n; ++v) {
        bool used = false;
        for (int q = 0; q < fr.t; ++q)
          if (q != slot && base[static_cast<std::size_t>(q)] == v) used = true;
        if (used) continue;
        J[static_cast<std::size_t>(slot)] = v;
        sum += a[table_index(fr.nt, rI, rank_tuple(fr.n, J))];
      }
      worst = std::max(worst, std::fabs(sum));
    }
  }
  return worst;
}

// b(I,J) = a(I,J) - (1/(n-t+1)) sum_{i not in I minus slot} a(I[slot<-i], J).
std::vector<double> row_update(const LevelFrame& fr, const std::vector<double>& a, int slot) {
  std::vector<double> b(a.size());
  std::vector<int> I;
  for (std::int64_t rI = 0; rI < fr.nt; ++rI) {
    const auto& base = fr.tuples[static_cast<std::size_t>(rI)];
    I = base;
    std::vector<std::int64_t> family;
    for (int v = 1; v <= fr.n; ++v) {
      bool used = false;
      for (int q = 0; q < fr.t; ++q)
        if (q != slot && base[static_cast<std::size_t>(q)] == v) used = true;
      if (used) continue;
      I[static_cast<std::size_t>(slot)] = v;
      family.push_back(rank_tuple(fr.n, I));
    }
    const double inv = 1.0 / static_cast<double>(fr.n - fr.t + 1);
    for (std::int64_t rJ = 0; rJ < fr.nt; ++rJ) {
      double sum = 0.0;
      for (std::int64_t rIp : family) sum += a[table_index(fr.nt, rIp, rJ)];
      b[table_index(fr.nt, rI, rJ)] = a[table_index(fr.nt, rI, rJ)] - inv * sum;
    }
  }
  return b;
}

std::vector<double> column_update(const LevelFrame& fr, const std::vector<double>& a, int slot) {
  std::vector<double> b(a.size());
  std::vector<int> J;
  for (std::int64_t rJ = 0; rJ < fr.nt; ++rJ) {
    const auto& base = fr.tuples[static_cast<std::size_t>(rJ)];
    J = base;
    std::vector<std::int64_t> family;
    for (int v = 1; v <= fr.n; ++v) {
      bool used = false;
      for (int q = 0; q < fr.t; ++q)
        if (q != slot && base[static_cast<std::size_t>(q)] == v) used = true;
      if (used) continue;
      J[static_cast<std::size_t>(slot)] = v;
      family.push_back(rank_tuple(fr.n, J));
    }
    const double inv = 1.0 / static_cast<double>(fr.n - fr.t + 1);
    for (std::int64_t rI = 0; rI < fr.nt; ++rI) {
      double sum = 0.0;
      for (std::int64_t rJp : family) sum += a[table_index(fr.nt, rI, rJp)];
      b[table_index(fr.nt, rI, rJ)] = a[table_index(fr.nt, rI, rJ)] - inv * sum;
    }
  }
  return b;
}

// Average over simultaneous reindexings of the two tuples; preserves the
// represented function and the zero-flux relations.
std::vector<double> symmetrize(const LevelFrame& fr, const std::vector<double>& a) {
  std::vector<double> b(a.size(), 0.0);
  const std::int64_t tf = factorial(fr.t);
  std::vector<int> Ip(static_cast<std::size_t>(fr.t)), Jp(static_cast<std::size_t>(fr.t));
  for (std::int64_t pr = 0; pr < tf; ++pr) {
    const Permutation sigma = unrank(fr.t, pr);
    for (std::int64_t rI = 0; rI < fr.nt; ++rI) {
      const auto& I = fr.tuples[static_cast<std::size_t>(rI)];
      for (int q = 0; q < fr.t; ++q)
        Ip[static_cast<std::size_t>(q)] = I[static_cast<std::size_t>(sigma(q + 1) - 1)];
      const std::int64_t rIp = rank_tuple(fr.n, Ip);
      for (std::int64_t rJ = 0; rJ < fr.nt; ++rJ) {
        const auto& J = fr.tuples[static_cast<std::size_t>(rJ)];
        for (int q = 0; q < fr.t; ++q)
          Jp[static_cast<std::size_t>(q)] = J[static_cast<std::size_t>(sigma(q + 1) - 1)];
        b[table_index(fr.nt, rI, rJ)] +=
            a[table_index(fr.nt, rIp, rank_tuple(fr.n, Jp))];
      }
    }
  }
  for (auto& v : b) v /= static_cast<double>(tf);
  return b;
}

}  // namespace

NormalizedRep normalize(const SnFunction& f, int d, const NormalizeOptions& opts) {
  require(d >= 0 && d <= f.n - 1, "normalize: level range");
  require(norm2(f - project_le(f, d)) <= opts.tol, "normalize: f not in V_d within tolerance");

  NormalizedRep rep;
  rep.n = f.n;
  rep.levels.assign(static_cast<std::size_t>(d) + 1, {});

  SnFunction residual = f;
  for (int t = d; t >= 1; --t) {
    LevelFrame fr{f.n, t, falling_factorial(f.n, t), all_tuples(f.n, t)};
    std::vector<double> a = min_norm_level_solve(f.n, t, residual.values);
    const double scale = std::max(1.0, max_abs(a));

    for (int slot = 0; slot < t; ++slot) {
      a = row_update(fr, a, slot);
      if (opts.instrument) {
        for (int done = 0; done <= slot; ++done)
          require(row_violation(fr, a, done) <= 1e-8 * scale,
                  "normalize: row relation failed after row update");
      }
    }
    for (int slot = 0; slot < t; ++slot) {
      a = column_update(fr, a, slot);
      if (opts.instrument) {
        for (int done = 0; done <= slot; ++done)
          require(column_violation(fr, a, done) <= 1e-8 * scale,
                  "normalize: column relation failed after column update");
        for (int rs = 0; rs < t; ++rs)
          require(row_violation(fr, a, rs) <= 1e-8 * scale,
                  "normalize: column update destroyed a row relation");
      }
    }
    a = symmetrize(fr, a);
    rep.levels[static_cast<std::size_t>(t)] = a;
    residual = residual - evaluate_level(rep, t);
    // The discarded parts stay one level down.
    require(norm2(residual - project_le(residual, t - 1)) <= 1e-6,
            "normalize: residual escaped V_{t-1}");
  }
  rep.levels[0] = {mean(residual)};
  {
    SnFunction flat(f.n, rep.levels[0][0]);
    require(norm2(residual - flat) <= 1e-6, "normalize: level-0 residual not constant");
  }
  return rep;
}

RelationViolations relation_violations(const NormalizedRep& rep) {
  RelationViolations out;
  for (int t = 1; t <= rep.top_level(); ++t) {
    const auto& a = rep.levels[static_cast<std::size_t>(t)];
    if (a.empty()) continue;
    LevelFrame fr{rep.n, t, falling_factorial(rep.n, t), all_tuples(rep.n, t)};
    for (int slot = 0; slot < t; ++slot) {
      out.row = std::max(out.row, row_violation(fr, a, slot));
      out.column = std::max(out.column, column_violation(fr, a, slot));
    }
    const std::vector<double> sym = symmetrize(fr, a);
    for (std::size_t i = 0; i < a.size(); ++i)
      out.symmetry = std::max(out.symmetry, std::fabs(sym[i] - a[i]));
  }
  return out;
}

ClaimAux check_claim_aux(const NormalizedRep& rep, int r, int t,
                         const std::vector<int>& R, const std::vector<int>& I,
                         const std::vector<int>& J) {
  require(r >= 1 && r <= rep.top_level(), "check_claim_aux: level range");
  require(static_cast<int>(J.size()) == r, "check_claim_aux: |J| must be r");
  require(static_cast<int>(R.size()) == r - t, "check_claim_aux: |R| must be r - t");
  require(static_cast<int>(I.size()) >= r, "check_claim_aux: |I| must be >= r");
  for (int v : R)
    require(std::find(I.begin(), I.end(), v) != I.end(), "check_claim_aux: R must lie in I");

  const auto& a = rep.levels[static_cast<std::size_t>(r)];
  require(!a.empty(), "check_claim_aux: empty level");
  const std::int64_t nr = falling_factorial(rep.n, r);
  const std::int64_t rJ = rank_tuple(rep.n, J);

  const auto sum_over = [&](const std::vector<int>& pool) {
    double acc = 0.0;
    std::vector<int> tup(static_cast<std::size_t>(t));
    std::vector<char> used(pool.size(), 0);
    std::function<void(int)> rec = [&](int depth) {
      if (depth == t) {
        std::vector<int> full = R;
        full.insert(full.end(), tup.begin(), tup.end());
        acc += a[table_index(nr, rank_tuple(rep.n, full), rJ)];
        return;
      }
      for (std::size_t q = 0; q < pool.size(); ++q) {
        if (used[q]) continue;
        used[q] = 1;
        tup[static_cast<std::size_t>(depth)] = pool[q];
        rec(depth + 1);
        used[q] = 0;
      }
    };
    rec(0);
    return acc;
  };

  std::vector<int> outside, inside;
  for (int v = 1; v <= rep.n; ++v)
    if (std::find(I.begin(), I.end(), v) == I.end()) outside.push_back(v);
  for (int v : I)
    if (std::find(R.begin(), R.end(), v) == R.end()) inside.push_back(v);

  ClaimAux out;
  out.lhs = sum_over(outside);
  out.rhs = ((t % 2 == 0) ? 1.0 : -1.0) * sum_over(inside);
  return out;
}

double analytic_influence(const NormalizedRep& rep, const std::vector<int>& S,
                          const std::vector<int>& T) {
  require(S.size() == T.size(), "analytic_influence: |S| != |T|");
  const int s = static_cast<int>(S.size());
  const int n = rep.n;
  double acc = 0.0;
  for (int r = 0; r + s <= rep.top_level(); ++r) {
    const auto& a = rep.levels[static_cast<std::size_t>(r + s)];
    if (a.empty()) continue;
    const std::int64_t nl = falling_factorial(n, r + s);
    const double weight = std::pow(static_cast<double>(factorial(r + s)), 2.0) *
                          std::pow(static_cast<double>(n), -(r + s));
    // Enumerate I from [n] \ S and J from [n] \ T, both ordered r-tuples.
    std::vector<int> poolI, poolJ;
    for (int v = 1; v <= n; ++v) {
      if (std::find(S.begin(), S.end(), v) == S.end()) poolI.push_back(v);
      if (std::find(T.begin(), T.end(), v) == T.end()) poolJ.push_back(v);
    }
    std::vector<int> tupI = S, tupJ = T;
    tupI.resize(static_cast<std::size_t>(s + r));
    tupJ.resize(static_cast<std::size_t>(s + r));
    std::vector<char> usedI(poolI.size(), 0);
    double level_acc = 0.0;
    std::function<void(int)> recI = [&](int depth) {
      if (depth == r) {
        const std::int64_t rI = rank_tuple(n, tupI);
        std::vector<char> usedJ(poolJ.size(), 0);
        std::function<void(int)> recJ = [&](int dj) {
          if (dj == r) {
            const double v = a[table_index(nl, rI, rank_tuple(n, tupJ))];
            level_acc += v * v;
            return;
          }
          for (std::size_t q = 0; q < poolJ.size(); ++q) {
            if (usedJ[q]) continue;
            usedJ[q] = 1;
            tupJ[static_cast<std::size_t>(s + dj)] = poolJ[q];
            recJ(dj + 1);
            usedJ[q] = 0;
          }
        };
        recJ(0);
        return;
      }
      for (std::size_t q = 0; q < poolI.size(); ++q) {
        if (usedI[q]) continue;
        usedI[q] = 1;
        tupI[static_cast<std::size_t>(s + depth)] = poolI[q];
        recI(depth + 1);
        usedI[q] = 0;
      }
    };
    recI(0);
    acc += weight * level_acc;
  }
  return acc;
}

InfluenceTable influence_table(const NormalizedRep& rep) {
  InfluenceTable tab;
  for (int s = 0; s <= rep.top_level(); ++s) {
    const std::int64_t ns = falling_factorial(rep.n, s);
    for (std::int64_t rS = 0; rS < ns; ++rS) {
      const auto S = unrank_tuple(rep.n, s, rS);
      for (std::int64_t rT = 0; rT < ns; ++rT) {
        const auto T = unrank_tuple(rep.n, s, rT);
        InfluenceEntry e{S, T, analytic_influence(rep, S, T)};
        if (e.value > tab.max_value) {
          tab.max_value = e.value;
          tab.argmax_S = S;
          tab.argmax_T = T;
        }
        tab.entries.push_back(std::move(e));
      }
    }
  }
  return tab;
}

bool is_analytically_global(const NormalizedRep& rep, double eps, InfluenceEntry* witness) {
  const InfluenceTable tab = influence_table(rep);
  if (witness) *witness = InfluenceEntry{tab.argmax_S, tab.argmax_T, tab.max_value};
  return tab.max_value <= eps;
}

Hyp4Result hyp4_check(const NormalizedRep& rep) {
  int nonzero_levels = 0;
  for (int k = 0; k <= rep.top_level(); ++k) {
    const auto& lvl = rep.levels[static_cast<std::size_t>(k)];
    for (double v : lvl)
      if (v != 0.0) {
        ++nonzero_levels;
        break;
      }
  }
  require(nonzero_levels <= 1, "hyp4_check: rep must be a single homogeneous level");

  Hyp4Result out{0.0, 0.0, 0.0};
  const SnFunction f = evaluate(rep);
  out.lhs = norm_q(f, 4.0);
  out.lhs = out.lhs * out.lhs * out.lhs * out.lhs;
  for (int s = 0; s <= rep.top_level(); ++s) {
    const std::int64_t ns = falling_factorial(rep.n, s);
    double block = 0.0;
    for (std::int64_t rS = 0; rS < ns; ++rS) {
      const auto S = unrank_tuple(rep.n, s, rS);
      for (std::int64_t rT = 0; rT < ns; ++rT) {
        const double v = analytic_influence(rep, S, unrank_tuple(rep.n, s, rT));
        block += v * v;
      }
    }
    out.rhs += std::pow(4.0 / rep.n, s) * block;
    out.rhs_3p += std::pow(3.0 / rep.n, s) * block;
  }
  return out;
}

double lifted_fourth_moment(const NormalizedRep& rep, int d, std::int64_t budget) {
  require(d >= 0 && d <= rep.top_level(), "lifted_fourth_moment: level range");
  for (int k = 0; k <= rep.top_level(); ++k) {
    if (k == d) continue;
    for (double v : rep.levels[static_cast<std::size_t>(k)])
      require(v == 0.0, "lifted_fourth_moment: rep must be homogeneous at level d");
  }
  const int n = rep.n;
  const double p = 1.0 / n;
  const double m3 = (1.0 - 2.0 * p) / std::sqrt(p * (1.0 - p));
  const double m4 = (1.0 - 3.0 * p * (1.0 - p)) / (p * (1.0 - p));

  struct Term {
    std::vector<std::pair<int, int>> coords;  // sorted (i, j) pairs
    double w;
  };
  std::vector<Term> terms;
  const auto& table = rep.levels[static_cast<std::size_t>(d)];
  const std::int64_t nd = falling_factorial(n, d);
  const double amp = std::pow(p * (1.0 - p), d / 2.0);
  for (std::int64_t rI = 0; rI < nd; ++rI) {
    const auto I = unrank_tuple(n, d, rI);
    for (std::int64_t rJ = 0; rJ < nd; ++rJ) {
      const double a = table.empty() ? 0.0 : table[table_index(nd, rI, rJ)];
      if (a == 0.0) continue;
      const auto J = unrank_tuple(n, d, rJ);
      Term t;
      for (int q = 0; q < d; ++q)
        t.coords.emplace_back(I[static_cast<std::size_t>(q)], J[static_cast<std::size_t>(q)]);
      std::sort(t.coords.begin(), t.coords.end());
      t.w = amp * a;
      terms.push_back(std::move(t));
    }
  }
  const auto cnt = static_cast<std::int64_t>(terms.size());
  const long double total = static_cast<long double>(cnt) * cnt * cnt * cnt;
  require(total <= static_cast<long double>(budget),
          "lifted_fourth_moment: d too large for the 4-fold sum budget");

  double acc = 0.0;
  std::vector<std::pair<int, int>> merged;
  for (std::int64_t a = 0; a < cnt; ++a)
    for (std::int64_t b = 0; b < cnt; ++b)
      for (std::int64_t c = 0; c < cnt; ++c)
        for (std::int64_t e = 0; e < cnt; ++e) {
          merged.clear();
          for (const auto* t : {&terms[static_cast<std::size_t>(a)], &terms[static_cast<std::size_t>(b)],
                                &terms[static_cast<std::size_t>(c)], &terms[static_cast<std::size_t>(e)]})
            merged.insert(merged.end(), t->coords.begin(), t->coords.end());
          std::sort(merged.begin(), merged.end());
          double moment = 1.0;
          std::size_t i = 0;
          while (i < merged.size() && moment != 0.0) {
            std::size_t j = i;
            while (j + 1 < merged.size() && merged[j + 1] == merged[i]) ++j;
            const std::size_t mult = j - i + 1;
            if (mult == 1) moment = 0.0;
            else if (mult == 3) moment *= m3;
            else if (mult == 4) moment *= m4;
            i = j + 1;
          }
          if (moment != 0.0)
            acc += moment * terms[static_cast<std::size_t>(a)].w * terms[static_cast<std::size_t>(b)].w *
                   terms[static_cast<std::size_t>(c)].w * terms[static_cast<std::size_t>(e)].w;
        }
  return acc;
}

std::string rep_to_json(const NormalizedRep& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  bool first = true;
  for (int k = 0; k <= rep.top_level(); ++k) {
    const auto& lvl = rep.levels[static_cast<std::size_t>(k)];
    const std::int64_t nk = falling_factorial(rep.n, k);
    for (std::int64_t rI = 0; rI < nk; ++rI)
      for (std::int64_t rJ = 0; rJ < nk; ++rJ) {
        const double v = lvl.empty() ? 0.0 : lvl[table_index(nk, rI, rJ)];
        if (v == 0.0) continue;
        if (!first) os << ",";
        first = false;
        os << "{\"level\":" << k << ",\"I\":[";
        const auto I = unrank_tuple(rep.n, k, rI);
        for (std::size_t q = 0; q < I.size(); ++q) os << (q ? "," : "") << I[q];
        os << "],\"J\":[";
        const auto J = unrank_tuple(rep.n, k, rJ);
        for (std::size_t q = 0; q < J.size(); ++q) os << (q ? "," : "") << J[q];
        os << "],\"coefficient\":" << v << "}";
      }
  }
  os << "]";
  return os.str();
}

}  // namespace snfa
