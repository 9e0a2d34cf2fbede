#include "snfa/repthy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

#include "snfa/span_projector.hpp"

namespace snfa {

void Partition::validate() const {
  require(!parts.empty(), "Partition: empty");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    require(parts[i] >= 1, "Partition: parts must be positive");
    if (i > 0) require(parts[i - 1] >= parts[i], "Partition: not weakly decreasing");
  }
}

int Partition::n() const {
  int s = 0;
  for (int p : parts) s += p;
  return s;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ",";
    os << parts[i];
  }
  os << ")";
  return os.str();
}

std::vector<Partition> partitions_of(int n) {
  require(n >= 1, "partitions_of: n >= 1");
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int maxPart) {
    if (rem == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int p = std::min(rem, maxPart); p >= 1; --p) {
      cur.push_back(p);
      rec(rem - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;  // reverse-lexicographic: (n) first, (1^n) last
}

bool dominates(const Partition& lambda, const Partition& mu) {
  require(lambda.n() == mu.n(), "dominates: mismatched n");
  int sl = 0, sm = 0;
  const std::size_t rows = std::max(lambda.parts.size(), mu.parts.size());
  for (std::size_t i = 0; i < rows; ++i) {
    sl += i < lambda.parts.size() ? lambda.parts[i] : 0;
    sm += i < mu.parts.size() ? mu.parts[i] : 0;
    if (sl < sm) return false;
  }
  return true;
}

Partition transpose(const Partition& lambda) {
  std::vector<int> t(static_cast<std::size_t>(lambda.parts[0]), 0);
  for (int p : lambda.parts)
    for (int j = 0; j < p; ++j) ++t[static_cast<std::size_t>(j)];
  return Partition(std::move(t));
}

std::int64_t hook_dim(const Partition& lambda) {
  const Partition lt = transpose(lambda);
  // dim = n! / prod hooks; divide greedily to stay in integers.
  std::vector<std::int64_t> hooks;
  for (int i = 0; i < lambda.rows(); ++i)
    for (int j = 0; j < lambda.parts[static_cast<std::size_t>(i)]; ++j)
      hooks.push_back((lambda.parts[static_cast<std::size_t>(i)] - j) +
                      (lt.parts[static_cast<std::size_t>(j)] - i) - 1);
  long double dim = static_cast<long double>(factorial(lambda.n()));
  for (std::int64_t h : hooks) dim /= static_cast<long double>(h);
  return static_cast<std::int64_t>(dim + 0.5L);
}

std::vector<Tabloid> tabloids_of(const Partition& lambda) {
  const int n = lambda.n();
  std::vector<Tabloid> out;
  Tabloid cur(static_cast<std::size_t>(lambda.rows()));
  std::function<void(int)> rec = [&](int v) {
    if (v > n) {
      for (int i = 0; i < lambda.rows(); ++i)
        if (static_cast<int>(cur[static_cast<std::size_t>(i)].size()) !=
            lambda.parts[static_cast<std::size_t>(i)])
          return;
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < lambda.rows(); ++i) {
      auto& block = cur[static_cast<std::size_t>(i)];
      if (static_cast<int>(block.size()) < lambda.parts[static_cast<std::size_t>(i)]) {
        block.push_back(v);
        rec(v + 1);
        block.pop_back();
      }
    }
  };
  rec(1);
  return out;
}

SnFunction tabloid_coset_indicator(int n, const Tabloid& A, const Tabloid& B) {
  SnFunction out(n);
  std::vector<int> block_of_value(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t i = 0; i < B.size(); ++i)
    for (int v : B[i]) block_of_value[static_cast<std::size_t>(v)] = static_cast<int>(i);
  for (std::int64_t r = 0; r < out.size(); ++r) {
    const Permutation pi = unrank(n, r);
    bool ok = true;
    for (std::size_t i = 0; i < A.size() && ok; ++i)
      for (int v : A[i])
        if (block_of_value[static_cast<std::size_t>(pi(v))] != static_cast<int>(i)) {
          ok = false;
          break;
        }
    if (ok) out[r] = 1.0;
  }
  return out;
}

namespace {

struct RepCaches {
  std::mutex mu;
  std::map<std::pair<int, std::vector<int>>, std::shared_ptr<SpanProjector>> v_lambda;
  std::map<std::pair<int, std::vector<int>>, std::shared_ptr<SpanProjector>> w_lambda;
  std::map<std::pair<int, std::vector<int>>, std::shared_ptr<Eigen::MatrixXd>> onb_pure;
};

RepCaches& caches() {
  static RepCaches c;
  return c;
}

std::vector<std::int32_t> fn_support(const SnFunction& f) {
  std::vector<std::int32_t> s;
  for (std::int64_t r = 0; r < f.size(); ++r)
    if (f[r] != 0.0) s.push_back(static_cast<std::int32_t>(r));
  return s;
}

std::vector<std::vector<std::int32_t>> lambda_supports(int n, const Partition& lambda) {
  const auto tabs = tabloids_of(lambda);
  std::vector<std::vector<std::int32_t>> sup;
  sup.reserve(tabs.size() * tabs.size());
  for (const auto& A : tabs)
    for (const auto& B : tabs)
      sup.push_back(fn_support(tabloid_coset_indicator(n, A, B)));
  return sup;
}

std::shared_ptr<SpanProjector> v_lambda_projector(int n, const Partition& lambda) {
  auto& c = caches();
  const std::pair<int, std::vector<int>> key{n, lambda.parts};
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.v_lambda.find(key);
    if (it != c.v_lambda.end()) return it->second;
  }
  auto proj = std::make_shared<SpanProjector>(factorial(n), lambda_supports(n, lambda));
  std::lock_guard<std::mutex> lock(c.mu);
  return c.v_lambda.try_emplace(key, std::move(proj)).first->second;
}

// Projector onto sum of V_mu over mu strictly dominating lambda.
std::shared_ptr<SpanProjector> w_lambda_projector(int n, const Partition& lambda) {
  auto& c = caches();
  const std::pair<int, std::vector<int>> key{n, lambda.parts};
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.w_lambda.find(key);
    if (it != c.w_lambda.end()) return it->second;
  }
  std::vector<std::vector<std::int32_t>> sup;
  for (const Partition& mu : partitions_of(n)) {
    if (mu == lambda || !dominates(mu, lambda)) continue;
    auto ms = lambda_supports(n, mu);
    sup.insert(sup.end(), std::make_move_iterator(ms.begin()),
               std::make_move_iterator(ms.end()));
  }
  std::shared_ptr<SpanProjector> proj;
  if (!sup.empty())
    proj = std::make_shared<SpanProjector>(factorial(n), std::move(sup));
  std::lock_guard<std::mutex> lock(c.mu);
  return c.w_lambda.try_emplace(key, std::move(proj)).first->second;
}

}  // namespace

SnFunction project_lambda(const SnFunction& f, const Partition& lambda) {
  require(lambda.n() == f.n, "project_lambda: partition of wrong n");
  SnFunction out(f.n);
  out.values = v_lambda_projector(f.n, lambda)->project(f.values);
  return out;
}

SnFunction project_pure_lambda(const SnFunction& f, const Partition& lambda) {
  require(lambda.n() == f.n, "project_pure_lambda: partition of wrong n");
  const SnFunction pl = project_lambda(f, lambda);
  const auto w = w_lambda_projector(f.n, lambda);
  if (!w) return pl;  // lambda = (n): nothing dominates it strictly
  SnFunction out(f.n);
  const std::vector<double> wpart = w->project(pl.values);
  for (std::int64_t r = 0; r < out.size(); ++r)
    out[r] = pl[r] - wpart[static_cast<std::size_t>(r)];
  return out;
}

SignTwist sign_twist_check(const SnFunction& f, const Partition& lambda) {
  const SnFunction sgn = sign_fn(f.n);
  SnFunction fs(f.n);
  for (std::int64_t r = 0; r < f.size(); ++r) fs[r] = f[r] * sgn[r];
  SignTwist st;
  st.lhs = project_pure_lambda(fs, lambda);
  const SnFunction ft = project_pure_lambda(f, transpose(lambda));
  st.rhs = SnFunction(f.n);
  for (std::int64_t r = 0; r < f.size(); ++r) st.rhs[r] = ft[r] * sgn[r];
  return st;
}

double FamilyWalk::delta() const {
  return static_cast<double>(members.size()) / static_cast<double>(factorial(n));
}

FamilyWalk family_walk(int n, const std::vector<std::int64_t>& members) {
  require(!members.empty(), "family_walk: empty family");
  FamilyWalk F;
  F.n = n;
  F.members = members;
  std::sort(F.members.begin(), F.members.end());
  F.members.erase(std::unique(F.members.begin(), F.members.end()), F.members.end());
  return F;
}

FamilyWalk inverse_family(const FamilyWalk& F) {
  FamilyWalk G;
  G.n = F.n;
  for (std::int64_t r : F.members) G.members.push_back(rank(unrank(F.n, r).inverse()));
  std::sort(G.members.begin(), G.members.end());
  return G;
}

SnFunction apply_TF(const FamilyWalk& F, const SnFunction& f) {
  require(F.n == f.n, "apply_TF: mismatched n");
  require(!F.members.empty(), "apply_TF: empty family");
  SnFunction out(f.n);
  for (std::int64_t r = 0; r < f.size(); ++r) {
    const Permutation pi = unrank(f.n, r);
    double acc = 0.0;
    for (std::int64_t ar : F.members) acc += f.at(compose(pi, unrank(f.n, ar)));
    out[r] = acc / static_cast<double>(F.members.size());
  }
  return out;
}

double trace_TF(const FamilyWalk& F) {
  const std::int64_t N = factorial(F.n);
  const double w = 1.0 / static_cast<double>(F.members.size());
  if (F.n <= 5) {
    // Dense compose of T_F^* T_F, then diagonal sum.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    for (std::int64_t r = 0; r < N; ++r) {
      const Permutation pi = unrank(F.n, r);
      for (std::int64_t ar : F.members)
        M(static_cast<Eigen::Index>(r),
          static_cast<Eigen::Index>(rank(compose(pi, unrank(F.n, ar))))) += w;
    }
    return (M.transpose() * M).trace();
  }
  // Matrix-free: diag(T_F^* T_F)(pi) = sum_sigma M[sigma,pi]^2, and the
  // nonzero entries of column pi are exactly sigma = pi a^{-1} for a in F,
  // each equal to w.  Membership is re-checked to keep the sum honest.
  std::set<std::int64_t> members(F.members.begin(), F.members.end());
  double tr = 0.0;
  for (std::int64_t r = 0; r < N; ++r) {
    const Permutation pi = unrank(F.n, r);
    for (std::int64_t ar : F.members) {
      const Permutation sigma = compose(pi, unrank(F.n, ar).inverse());
      if (members.count(rank(compose(sigma.inverse(), pi)))) tr += w * w;
    }
  }
  return tr;
}

namespace {

std::shared_ptr<Eigen::MatrixXd> onb_pure_lambda(int n, const Partition& lambda) {
  auto& c = caches();
  const std::pair<int, std::vector<int>> key{n, lambda.parts};
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.onb_pure.find(key);
    if (it != c.onb_pure.end()) return it->second;
  }
  const std::int64_t N = factorial(n);
  const auto vproj = v_lambda_projector(n, lambda);
  const auto wproj = w_lambda_projector(n, lambda);
  const auto tabs = tabloids_of(lambda);
  const int nt = static_cast<int>(tabs.size());
  Eigen::MatrixXd B(N, vproj->rank());
  for (int c2 = 0; c2 < vproj->rank(); ++c2) {
    const int col = vproj->pivots()[static_cast<std::size_t>(c2)];
    const SnFunction ind =
        tabloid_coset_indicator(n, tabs[static_cast<std::size_t>(col / nt)],
                                tabs[static_cast<std::size_t>(col % nt)]);
    std::vector<double> vals = ind.values;
    if (wproj) {
      const std::vector<double> wpart = wproj->project(vals);
      for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= wpart[i];
    }
    for (std::int64_t r = 0; r < N; ++r) B(r, c2) = vals[static_cast<std::size_t>(r)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  qr.setThreshold(1e-8);
  const auto rk = qr.rank();
  require(rk > 0, "onb_pure_lambda: empty layer");
  auto Q = std::make_shared<Eigen::MatrixXd>(qr.householderQ() *
                                             Eigen::MatrixXd::Identity(N, rk));
  std::lock_guard<std::mutex> lock(c.mu);
  return c.onb_pure.try_emplace(key, std::move(Q)).first->second;
}

}  // namespace

EigenBound eigen_bound_check(const FamilyWalk& F, const Partition& lambda) {
  require(lambda.n() == F.n, "eigen_bound_check: partition of wrong n");
  const auto Q = onb_pure_lambda(F.n, lambda);
  const FamilyWalk Finv = inverse_family(F);
  Eigen::MatrixXd AQ(Q->rows(), Q->cols());
  for (Eigen::Index c = 0; c < Q->cols(); ++c) {
    SnFunction col(F.n);
    for (Eigen::Index r = 0; r < Q->rows(); ++r) col[r] = (*Q)(r, c);
    const SnFunction img = apply_TF(Finv, apply_TF(F, col));
    for (Eigen::Index r = 0; r < Q->rows(); ++r) AQ(r, c) = img[r];
  }
  Eigen::MatrixXd A = Q->transpose() * AQ;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()),
                                                    Eigen::EigenvaluesOnly);
  EigenBound out;
  out.top_eigenvalue = es.eigenvalues().maxCoeff();
  out.bound = 1.0 / (static_cast<double>(hook_dim(lambda)) * F.delta());
  return out;
}

HoffmanReport hoffman_report(const FamilyWalk& F, const std::vector<std::int64_t>& A,
                             const std::vector<std::int64_t>& B) {
  const int n = F.n;
  for (std::int64_t r : F.members)
    require(unrank(n, r).parity() == 1, "hoffman_report: F must lie in A_n");
  SnFunction g(n), h(n);
  for (std::int64_t r : A) {
    require(unrank(n, r).parity() == 1, "hoffman_report: A must lie in A_n");
    g[r] = 1.0;
  }
  for (std::int64_t r : B) {
    require(unrank(n, r).parity() == 1, "hoffman_report: B must lie in A_n");
    h[r] = 1.0;
  }

  HoffmanReport rep;
  rep.inner_TFg_h = inner(apply_TF(F, g), h);
  rep.mean_g = mean(g);
  rep.mean_h = mean(h);
  rep.mu_g = 2.0 * rep.mean_g;
  rep.mu_h = 2.0 * rep.mean_h;
  rep.term_trivial = rep.mean_g * rep.mean_h;
  rep.block_top = rep.block_transpose = rep.block_bulk = 0.0;
  rep.term_sign = 0.0;

  const double delta = F.delta();
  rep.err3_expectation = std::sqrt(rep.mean_g * rep.mean_h) /
                         std::sqrt(std::pow(static_cast<double>(n), 4.0) * delta);
  rep.err3_density =
      std::sqrt(rep.mu_g * rep.mu_h) / (static_cast<double>(n) * n * std::sqrt(delta));

  for (const Partition& lambda : partitions_of(n)) {
    const SnFunction gl = project_pure_lambda(g, lambda);
    const SnFunction hl = project_pure_lambda(h, lambda);
    const SnFunction tgl = apply_TF(F, gl);
    HoffmanTerm term;
    term.lambda = lambda.to_string();
    term.tf_g_norm = norm2(tgl);
    term.h_norm = norm2(hl);
    term.cross = inner(tgl, hl);
    rep.terms.push_back(term);

    const bool trivial = (lambda.rows() == 1);
    const bool sign_layer = (lambda.parts[0] == 1);
    if (sign_layer) {
      rep.term_sign = term.cross;
      continue;
    }
    if (trivial) continue;
    if (lambda.parts[0] >= n - 3)
      rep.block_top += term.tf_g_norm * term.h_norm;
    else if (lambda.rows() >= n - 3)
      rep.block_transpose += term.tf_g_norm * term.h_norm;
    else
      rep.block_bulk += term.tf_g_norm * term.h_norm;
  }
  return rep;
}

bool is_product_free(const FamilyWalk& F) {
  std::set<std::int64_t> members(F.members.begin(), F.members.end());
  for (std::int64_t a : F.members) {
    const Permutation pa = unrank(F.n, a);
    for (std::int64_t b : F.members)
      if (members.count(rank(compose(unrank(F.n, b), pa)))) return false;
  }
  return true;
}

FamilyWalk builtin_odd_permutations(int n) {
  std::vector<std::int64_t> mem;
  for (std::int64_t r = 0; r < factorial(n); ++r)
    if (unrank(n, r).parity() == -1) mem.push_back(r);
  return family_walk(n, mem);
}

FamilyWalk builtin_three_cycle(int n) {
  require(n >= 3, "builtin_three_cycle: n >= 3");
  std::vector<int> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = i + 1;
  w[0] = 2;
  w[1] = 3;
  w[2] = 1;  // the 3-cycle 1->2->3->1
  return family_walk(n, {rank(Permutation(w))});
}

FamilyWalk builtin_shifted_window(int n) {
  require(n >= 4, "builtin_shifted_window: n >= 4");
  std::vector<std::int64_t> mem;
  for (std::int64_t r = 0; r < factorial(n); ++r) {
    const Permutation pi = unrank(n, r);
    if (pi.parity() == 1 && pi(1) == 2 && pi(2) > 2) mem.push_back(r);
  }
  return family_walk(n, mem);
}

void clear_repthy_caches() {
  auto& c = caches();
  std::lock_guard<std::mutex> lock(c.mu);
  c.v_lambda.clear();
  c.w_lambda.clear();
  c.onb_pure.clear();
}

}  // namespace snfa
