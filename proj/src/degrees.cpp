#include "snfa/degrees.hpp"

#include <Eigen/QR>
#include <map>
#include <mutex>

namespace snfa {

std::vector<PairSet> spanning_tier(int n, int t) {
  std::vector<PairSet> out;
  enumerate_pair_sets_canonical(n, t, [&](const PairSet& T) { out.push_back(T); });
  return out;
}

namespace {

std::vector<std::int32_t> support_of(int n, const PairSet& T) {
  std::vector<std::int32_t> sup;
  sup.reserve(static_cast<std::size_t>(coset_size(n, T)));
  for_each_coset(n, T, [&](std::int64_t, const Permutation& pi) {
    sup.push_back(static_cast<std::int32_t>(rank(pi)));
  });
  std::sort(sup.begin(), sup.end());
  return sup;
}

struct DegreeCaches {
  std::mutex mu;
  std::map<std::pair<int, int>, std::shared_ptr<SpanProjector>> projectors;
  std::map<std::pair<int, int>, std::shared_ptr<const Eigen::MatrixXd>> onb_le;
  std::map<std::pair<int, int>, std::shared_ptr<const Eigen::MatrixXd>> onb_pure;
};

DegreeCaches& caches() {
  static DegreeCaches c;
  return c;
}

std::shared_ptr<SpanProjector> projector_ptr(int n, int d) {
  require(n >= 1 && n <= kMaxN, "degree projector: n out of range");
  require(d >= 0 && d <= n - 1, "degree projector: need 0 <= d <= n-1");
  auto& c = caches();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.projectors.find({n, d});
    if (it != c.projectors.end()) return it->second;
  }
  const auto tier = spanning_tier(n, d);
  std::vector<std::vector<std::int32_t>> sup;
  sup.reserve(tier.size());
  for (const auto& T : tier) sup.push_back(support_of(n, T));
  auto proj = std::make_shared<SpanProjector>(factorial(n), std::move(sup));
  std::lock_guard<std::mutex> lock(c.mu);
  return c.projectors.try_emplace({n, d}, std::move(proj)).first->second;
}

}  // namespace

const SpanProjector& degree_projector(int n, int d) { return *projector_ptr(n, d); }

SnFunction project_le(const SnFunction& f, int d) {
  require(d >= 0, "project_le: d >= 0");
  if (d >= f.n - 1 || f.n == 1) return f;
  SnFunction out(f.n);
  out.values = degree_projector(f.n, d).project(f.values);
  return out;
}

CosetFunction project_le(const CosetFunction& f, int d) {
  const int m = f.reduced_n();
  CosetFunction out = f;
  if (m <= 1 || d >= m - 1) return out;
  out.values = degree_projector(m, d).project(f.values);
  return out;
}

SnFunction pure_part(const SnFunction& f, int d) {
  require(d >= 0 && d <= f.n - 1, "pure_part: level range");
  if (d == 0) return project_le(f, 0);
  return project_le(f, d) - project_le(f, d - 1);
}

DegreeDecomposition decompose(const SnFunction& f) {
  DegreeDecomposition dec;
  dec.parts.reserve(static_cast<std::size_t>(f.n));
  SnFunction prev = project_le(f, 0);
  dec.parts.push_back(prev);
  for (int d = 1; d <= f.n - 1; ++d) {
    SnFunction cur = project_le(f, d);
    dec.parts.push_back(cur - prev);
    prev = std::move(cur);
  }
  return dec;
}

int degree_of(const SnFunction& f, double tol) {
  require(tol >= 0.0, "degree_of: tol >= 0");
  for (int d = 0; d <= f.n - 1; ++d) {
    if (norm2(f - project_le(f, d)) <= tol) return d;
  }
  return f.n - 1;
}

int junta_space_dim(int n, const std::vector<int>& A, const std::vector<int>& B) {
  require(A.size() == B.size(), "junta_space_dim: |A| != |B|");
  // All consistent T inside A x B, deduplicated as sets: choose positions
  // from A in increasing order, targets an ordered pick from B.
  std::vector<std::vector<std::int32_t>> sup;
  const int k = static_cast<int>(A.size());
  std::vector<int> posIdx;
  std::function<void(int, std::vector<int>&)> fill_targets =
      [&](int depth, std::vector<int>& chosen) {
        if (depth == static_cast<int>(posIdx.size())) {
          PairSet T;
          for (std::size_t q = 0; q < posIdx.size(); ++q)
            T.push(A[static_cast<std::size_t>(posIdx[q])], chosen[q]);
          sup.push_back(support_of(n, T));
          return;
        }
        for (int b : B) {
          if (std::find(chosen.begin(), chosen.end(), b) != chosen.end()) continue;
          chosen.push_back(b);
          fill_targets(depth + 1, chosen);
          chosen.pop_back();
        }
      };
  std::function<void(int, int)> pick_pos = [&](int start, int remaining) {
    if (remaining == 0) {
      std::vector<int> chosen;
      fill_targets(0, chosen);
      return;
    }
    for (int i = start; i < k; ++i) {
      posIdx.push_back(i);
      pick_pos(i + 1, remaining - 1);
      posIdx.pop_back();
    }
  };
  for (int t = 0; t <= k; ++t) pick_pos(0, t);
  SpanProjector proj(factorial(n), std::move(sup));
  return proj.rank();
}

bool is_AB_junta(const SnFunction& f, const std::vector<int>& A,
                 const std::vector<int>& B, double tol) {
  require(A.size() == B.size(), "is_AB_junta: |A| != |B|");
  const int n = f.n;
  auto outside = [&](const std::vector<int>& S) {
    std::vector<int> out;
    for (int i = 1; i <= n; ++i)
      if (std::find(S.begin(), S.end(), i) == S.end()) out.push_back(i);
    return out;
  };
  // Invariance under generators of the pointwise stabilizers: right action
  // for S_{[n] \ A}, left action for S_{[n] \ B}.
  const auto freeA = outside(A);
  for (std::size_t a = 0; a + 1 < freeA.size(); ++a) {
    const Permutation tau = Permutation::transposition(n, freeA[a], freeA[a + 1]);
    if (norm_inf(act_right(f, tau) - f) > tol) return false;
  }
  const auto freeB = outside(B);
  for (std::size_t b = 0; b + 1 < freeB.size(); ++b) {
    const Permutation tau = Permutation::transposition(n, freeB[b], freeB[b + 1]);
    if (norm_inf(act_left(tau, f) - f) > tol) return false;
  }
  return true;
}

namespace {

std::shared_ptr<const Eigen::MatrixXd> onb_pure_uncached(int n, int d) {
  const std::int64_t N = factorial(n);
  if (d == 0) {
    auto M = std::make_shared<Eigen::MatrixXd>(N, 1);
    M->setConstant(1.0 / std::sqrt(static_cast<double>(N)));
    return M;
  }
  // Dense matrix of the pivot columns of the level-d tier, with the part in
  // V_{d-1} removed, then an orthonormalization revealing dim V_{=d}.
  const auto& proj = degree_projector(n, d);
  const auto tier = spanning_tier(n, d);
  Eigen::MatrixXd Bm(N, proj.rank());
  for (int c = 0; c < proj.rank(); ++c) {
    Bm.col(c).setZero();
    const PairSet& T = tier[static_cast<std::size_t>(proj.pivots()[static_cast<std::size_t>(c)])];
    for_each_coset(n, T, [&](std::int64_t, const Permutation& pi) {
      Bm(static_cast<Eigen::Index>(rank(pi)), c) = 1.0;
    });
  }
  const auto Qle = onb_degree_le(n, d - 1);
  Bm.noalias() -= (*Qle) * (Qle->transpose() * Bm);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Bm);
  qr.setThreshold(1e-8);
  const auto r = qr.rank();
  require(r > 0, "onb_pure_degree: empty level");
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, r);
  return std::make_shared<Eigen::MatrixXd>(std::move(Q));
}

}  // namespace

std::shared_ptr<const Eigen::MatrixXd> onb_pure_degree(int n, int d) {
  require(d >= 0 && d <= n - 1, "onb_pure_degree: level range");
  auto& c = caches();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.onb_pure.find({n, d});
    if (it != c.onb_pure.end()) return it->second;
  }
  auto M = onb_pure_uncached(n, d);
  std::lock_guard<std::mutex> lock(c.mu);
  return c.onb_pure.try_emplace({n, d}, std::move(M)).first->second;
}

std::shared_ptr<const Eigen::MatrixXd> onb_degree_le(int n, int d) {
  require(d >= 0 && d <= n - 1, "onb_degree_le: level range");
  auto& c = caches();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.onb_le.find({n, d});
    if (it != c.onb_le.end()) return it->second;
  }
  std::shared_ptr<const Eigen::MatrixXd> M;
  if (d == 0) {
    M = onb_pure_degree(n, 0);
  } else {
    auto lower = onb_degree_le(n, d - 1);
    auto pure = onb_pure_degree(n, d);
    auto joined = std::make_shared<Eigen::MatrixXd>(lower->rows(),
                                                    lower->cols() + pure->cols());
    *joined << *lower, *pure;
    M = joined;
  }
  std::lock_guard<std::mutex> lock(c.mu);
  return c.onb_le.try_emplace({n, d}, std::move(M)).first->second;
}

void clear_degree_caches() {
  auto& c = caches();
  std::lock_guard<std::mutex> lock(c.mu);
  c.projectors.clear();
  c.onb_le.clear();
  c.onb_pure.clear();
}

}  // namespace snfa
