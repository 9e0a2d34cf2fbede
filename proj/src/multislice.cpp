#include "snfa/multislice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "snfa/span_projector.hpp"

namespace snfa {

std::int64_t multinomial(const std::vector<int>& counts) {
  int n = 0;
  for (int k : counts) {
    require(k >= 0, "multinomial: negative count");
    n += k;
  }
  std::int64_t r = 1;
  int placed = 0;
  for (int k : counts) {
    r *= binomial(n - placed, k);
    placed += k;
  }
  return r;
}

std::int64_t MultiSlice::size() const { return multinomial(counts); }

std::int64_t ms_rank(const MultiSlice& U, const std::vector<int>& x) {
  require(static_cast<int>(x.size()) == U.n, "ms_rank: wrong length");
  std::vector<int> rem = U.counts;
  std::int64_t r = 0;
  for (int pos = 0; pos < U.n; ++pos) {
    const int c = x[static_cast<std::size_t>(pos)];
    require(c >= 1 && c <= U.colors(), "ms_rank: color out of range");
    for (int cp = 1; cp < c; ++cp) {
      if (rem[static_cast<std::size_t>(cp - 1)] == 0) continue;
      --rem[static_cast<std::size_t>(cp - 1)];
      r += multinomial(rem);
      ++rem[static_cast<std::size_t>(cp - 1)];
    }
    require(rem[static_cast<std::size_t>(c - 1)] > 0, "ms_rank: counts violated");
    --rem[static_cast<std::size_t>(c - 1)];
  }
  return r;
}

std::vector<int> ms_unrank(const MultiSlice& U, std::int64_t r) {
  require(r >= 0 && r < U.size(), "ms_unrank: rank out of range");
  std::vector<int> rem = U.counts;
  std::vector<int> x(static_cast<std::size_t>(U.n));
  for (int pos = 0; pos < U.n; ++pos) {
    for (int c = 1; c <= U.colors(); ++c) {
      if (rem[static_cast<std::size_t>(c - 1)] == 0) continue;
      --rem[static_cast<std::size_t>(c - 1)];
      const std::int64_t block = multinomial(rem);
      if (r < block) {
        x[static_cast<std::size_t>(pos)] = c;
        break;
      }
      r -= block;
      ++rem[static_cast<std::size_t>(c - 1)];
    }
    require(x[static_cast<std::size_t>(pos)] != 0, "ms_unrank: internal");
  }
  return x;
}

MultiSliceFunction::MultiSliceFunction(MultiSlice U, double fill)
    : slice(std::move(U)), values(static_cast<std::size_t>(slice.size()), fill) {}

namespace {
double table_mean(const std::vector<double>& v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}
}  // namespace

double mean(const MultiSliceFunction& h) { return table_mean(h.values); }

double norm_q(const MultiSliceFunction& h, double q) {
  require(q >= 1.0, "norm_q: need q >= 1");
  std::vector<double> p(h.values.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::pow(std::fabs(h.values[i]), q);
  return std::pow(table_mean(p), 1.0 / q);
}

double norm2_sq(const MultiSliceFunction& h) {
  std::vector<double> p(h.values.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = h.values[i] * h.values[i];
  return table_mean(p);
}

double norm2(const MultiSliceFunction& h) { return std::sqrt(norm2_sq(h)); }

double inner(const MultiSliceFunction& a, const MultiSliceFunction& b) {
  require(a.slice.counts == b.slice.counts, "inner: different multi-slices");
  std::vector<double> p(a.values.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = a.values[i] * b.values[i];
  return table_mean(p);
}

double variance(const MultiSliceFunction& h) {
  const double m = mean(h);
  return norm2_sq(h) - m * m;
}

std::vector<std::vector<int>> canonical_blocks(const MultiSlice& U) {
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(U.colors()));
  int next = 1;
  for (int j = 0; j < U.colors(); ++j)
    for (int c = 0; c < U.counts[static_cast<std::size_t>(j)]; ++c)
      blocks[static_cast<std::size_t>(j)].push_back(next++);
  return blocks;
}

SnFunction lift(const MultiSliceFunction& h, const std::vector<std::vector<int>>& blocks) {
  const MultiSlice& U = h.slice;
  require(static_cast<int>(blocks.size()) == U.colors(), "lift: block count mismatch");
  std::vector<int> color_of(static_cast<std::size_t>(U.n) + 1, 0);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    require(static_cast<int>(blocks[j].size()) == U.counts[j], "lift: block size mismatch");
    for (int v : blocks[j]) {
      require(v >= 1 && v <= U.n && color_of[static_cast<std::size_t>(v)] == 0,
              "lift: blocks must partition [n]");
      color_of[static_cast<std::size_t>(v)] = static_cast<int>(j) + 1;
    }
  }
  SnFunction out(U.n);
  std::vector<int> x(static_cast<std::size_t>(U.n));
  for (std::int64_t r = 0; r < out.size(); ++r) {
    const Permutation pi = unrank(U.n, r);
    for (int i = 1; i <= U.n; ++i)
      x[static_cast<std::size_t>(i - 1)] = color_of[static_cast<std::size_t>(pi(i))];
    out[r] = h.values[static_cast<std::size_t>(ms_rank(U, x))];
  }
  return out;
}

namespace {

struct MsCaches {
  std::mutex mu;
  std::map<std::pair<std::vector<int>, int>, std::shared_ptr<SpanProjector>> projectors;
};

MsCaches& caches() {
  static MsCaches c;
  return c;
}

// Supports of the indicators 1_{x_A = alpha} for |A| = d (positions
// increasing, alpha over all color tuples).
std::shared_ptr<SpanProjector> ms_projector(const MultiSlice& U, int d) {
  auto& c = caches();
  const std::pair<std::vector<int>, int> key{U.counts, d};
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.projectors.find(key);
    if (it != c.projectors.end()) return it->second;
  }
  std::vector<std::vector<std::int32_t>> sup;
  std::vector<int> A(static_cast<std::size_t>(d));
  std::vector<int> alpha(static_cast<std::size_t>(d));
  const std::int64_t N = U.size();
  std::function<void(int)> fill_alpha;
  std::function<void(int, int)> pick_A = [&](int idx, int start) {
    if (idx == d) {
      fill_alpha(0);
      return;
    }
    for (int i = start; i <= U.n; ++i) {
      A[static_cast<std::size_t>(idx)] = i;
      pick_A(idx + 1, i + 1);
    }
  };
  fill_alpha = [&](int idx) {
    if (idx == d) {
      std::vector<std::int32_t> s;
      for (std::int64_t r = 0; r < N; ++r) {
        const std::vector<int> x = ms_unrank(U, r);
        bool ok = true;
        for (int q = 0; q < d; ++q)
          if (x[static_cast<std::size_t>(A[static_cast<std::size_t>(q)] - 1)] !=
              alpha[static_cast<std::size_t>(q)]) {
            ok = false;
            break;
          }
        if (ok) s.push_back(static_cast<std::int32_t>(r));
      }
      if (!s.empty()) sup.push_back(std::move(s));
      return;
    }
    for (int col = 1; col <= U.colors(); ++col) {
      alpha[static_cast<std::size_t>(idx)] = col;
      fill_alpha(idx + 1);
    }
  };
  if (d == 0) {
    std::vector<std::int32_t> all(static_cast<std::size_t>(N));
    for (std::int64_t r = 0; r < N; ++r) all[static_cast<std::size_t>(r)] = static_cast<std::int32_t>(r);
    sup.push_back(std::move(all));
  } else {
    pick_A(0, 1);
  }
  auto proj = std::make_shared<SpanProjector>(N, std::move(sup));
  std::lock_guard<std::mutex> lock(c.mu);
  return c.projectors.try_emplace(key, std::move(proj)).first->second;
}

// Degree cap: V_d(U) = everything once d >= distinct-color positions allow
// full resolution; n-1 suffices (fixing n-1 coordinates fixes the vector).
int ms_full_degree(const MultiSlice& U) { return U.n - 1; }

}  // namespace

MultiSliceFunction ms_project_le(const MultiSliceFunction& h, int d) {
  require(d >= 0, "ms_project_le: d >= 0");
  if (d >= ms_full_degree(h.slice)) return h;
  MultiSliceFunction out = h;
  out.values = ms_projector(h.slice, d)->project(h.values);
  return out;
}

MultiSliceFunction ms_pure(const MultiSliceFunction& h, int d) {
  if (d == 0) return ms_project_le(h, 0);
  MultiSliceFunction hi = ms_project_le(h, d);
  const MultiSliceFunction lo = ms_project_le(h, d - 1);
  for (std::size_t i = 0; i < hi.values.size(); ++i) hi.values[i] -= lo.values[i];
  return hi;
}

MultiSliceFunction ms_restrict(const MultiSliceFunction& h, const std::vector<int>& A,
                               const std::vector<int>& alpha) {
  require(A.size() == alpha.size(), "ms_restrict: A/alpha mismatch");
  const MultiSlice& U = h.slice;
  MultiSlice R;
  R.n = U.n - static_cast<int>(A.size());
  R.counts = U.counts;
  std::vector<bool> fixed(static_cast<std::size_t>(U.n) + 1, false);
  for (std::size_t q = 0; q < A.size(); ++q) {
    require(A[q] >= 1 && A[q] <= U.n && !fixed[static_cast<std::size_t>(A[q])],
            "ms_restrict: bad position");
    fixed[static_cast<std::size_t>(A[q])] = true;
    auto& cnt = R.counts[static_cast<std::size_t>(alpha[q] - 1)];
    require(cnt > 0, "ms_restrict: color exhausted");
    --cnt;
  }
  MultiSliceFunction out{R};
  std::vector<int> x(static_cast<std::size_t>(U.n));
  for (std::int64_t r = 0; r < out.size(); ++r) {
    const std::vector<int> z = ms_unrank(R, r);
    std::size_t zi = 0;
    for (int i = 1; i <= U.n; ++i)
      if (!fixed[static_cast<std::size_t>(i)]) x[static_cast<std::size_t>(i - 1)] = z[zi++];
    for (std::size_t q = 0; q < A.size(); ++q)
      x[static_cast<std::size_t>(A[q] - 1)] = alpha[q];
    out.values[static_cast<std::size_t>(r)] = h.values[static_cast<std::size_t>(ms_rank(U, x))];
  }
  return out;
}

std::vector<MsProfileRow> ms_globalness(const MultiSliceFunction& h, int d) {
  require(d <= h.slice.n, "ms_globalness: d <= n");
  std::vector<MsProfileRow> rows;
  for (int t = 0; t <= d; ++t) {
    MsProfileRow row{t, -1.0, {}, {}};
    std::vector<int> A(static_cast<std::size_t>(t)), alpha(static_cast<std::size_t>(t));
    std::function<void(int)> fill_alpha;
    std::function<void(int, int)> pick = [&](int idx, int start) {
      if (idx == t) {
        fill_alpha(0);
        return;
      }
      for (int i = start; i <= h.slice.n; ++i) {
        A[static_cast<std::size_t>(idx)] = i;
        pick(idx + 1, i + 1);
      }
    };
    fill_alpha = [&](int idx) {
      if (idx == t) {
        // Skip infeasible color patterns.
        std::vector<int> used(static_cast<std::size_t>(h.slice.colors()), 0);
        for (int a : alpha) ++used[static_cast<std::size_t>(a - 1)];
        for (int c2 = 0; c2 < h.slice.colors(); ++c2)
          if (used[static_cast<std::size_t>(c2)] > h.slice.counts[static_cast<std::size_t>(c2)])
            return;
        const double nrm = norm2(ms_restrict(h, A, alpha));
        if (nrm > row.max_norm) {
          row.max_norm = nrm;
          row.argmax_A = A;
          row.argmax_alpha = alpha;
        }
        return;
      }
      for (int c2 = 1; c2 <= h.slice.colors(); ++c2) {
        alpha[static_cast<std::size_t>(idx)] = c2;
        fill_alpha(idx + 1);
      }
    };
    if (t == 0) {
      row.max_norm = norm2(h);
    } else {
      pick(0, 1);
    }
    rows.push_back(row);
  }
  return rows;
}

double ms_influence(const MultiSliceFunction& h, int i) {
  const MultiSlice& U = h.slice;
  require(i >= 1 && i <= U.n, "ms_influence: coordinate range");
  double acc = 0.0;
  std::vector<int> x;
  for (int j = 1; j <= U.n; ++j) {
    if (j == i) continue;
    double lap = 0.0;
    for (std::int64_t r = 0; r < h.size(); ++r) {
      x = ms_unrank(U, r);
      std::swap(x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(j - 1)]);
      const double d = h.values[static_cast<std::size_t>(r)] -
                       h.values[static_cast<std::size_t>(ms_rank(U, x))];
      lap += d * d;
    }
    acc += lap / static_cast<double>(h.size());
  }
  return acc / static_cast<double>(U.n - 1);
}

double ms_total_influence(const MultiSliceFunction& h) {
  double acc = 0.0;
  for (int i = 1; i <= h.slice.n; ++i) acc += ms_influence(h, i);
  return acc;
}

SetFamily make_family(int n, int k, std::vector<std::uint32_t> members) {
  require(n >= 1 && n <= 31 && k >= 0 && k <= n, "make_family: bad parameters");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (std::uint32_t m : members)
    require(std::popcount(m) == k && (m >> n) == 0, "make_family: bad member");
  return SetFamily{n, k, std::move(members)};
}

SetFamily shadow_up(const SetFamily& F) {
  require(F.k < F.n, "shadow_up: k < n required");
  std::vector<std::uint32_t> out;
  for (std::uint32_t m : F.members)
    for (int v = 0; v < F.n; ++v)
      if (!(m & (1u << v))) out.push_back(m | (1u << v));
  return make_family(F.n, F.k + 1, std::move(out));
}

MultiSliceFunction family_indicator(const SetFamily& F) {
  MultiSlice U{F.n, {F.k, F.n - F.k}};
  MultiSliceFunction h{U};
  std::vector<int> x(static_cast<std::size_t>(F.n));
  for (std::uint32_t m : F.members) {
    for (int i = 0; i < F.n; ++i)
      x[static_cast<std::size_t>(i)] = (m & (1u << i)) ? 1 : 2;
    h.values[static_cast<std::size_t>(ms_rank(U, x))] = 1.0;
  }
  return h;
}

double gen_binomial(double y, int j) {
  require(j >= 0, "gen_binomial: j >= 0");
  double p = 1.0;
  for (int i = 0; i < j; ++i) p *= (y - i);
  return p / static_cast<double>(factorial(j));
}

double lovasz_parameter(int j, double target) {
  require(target >= 0.0, "lovasz_parameter: target >= 0");
  if (j == 0) return 0.0;
  double lo = static_cast<double>(j - 1), hi = static_cast<double>(j);
  while (gen_binomial(hi, j) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gen_binomial(mid, j) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LovaszBound kruskal_katona_check(const SetFamily& F) {
  require(!F.members.empty(), "kruskal_katona_check: empty family");
  const int j = F.n - F.k;  // complement level
  LovaszBound out;
  out.y = lovasz_parameter(j, static_cast<double>(F.members.size()));
  out.bound = gen_binomial(out.y, j - 1);
  out.shadow = static_cast<std::int64_t>(shadow_up(F).members.size());
  out.holds = static_cast<double>(out.shadow) >= out.bound - 1e-9;
  return out;
}

RaisingBound raising_quadratic(const SetFamily& F) {
  require(!F.members.empty() && F.k < F.n, "raising_quadratic: need nonempty F, k < n");
  // (M f)(B) = average of f over the k-subsets of B.
  const SetFamily up = shadow_up(F);
  std::vector<std::uint32_t> level_up;
  for (std::uint32_t m = 0; m < (1u << F.n); ++m)
    if (std::popcount(m) == F.k + 1) level_up.push_back(m);
  std::vector<char> inF(1u << F.n, 0);
  for (std::uint32_t m : F.members) inF[m] = 1;
  double quad = 0.0;
  for (std::uint32_t B : level_up) {
    int hits = 0;
    for (int v = 0; v < F.n; ++v)
      if (B & (1u << v)) hits += inF[B & ~(1u << v)];
    const double mf = static_cast<double>(hits) / static_cast<double>(F.k + 1);
    quad += mf * mf;
  }
  quad /= static_cast<double>(level_up.size());
  RaisingBound out;
  out.mu_up = up.measure();
  out.quad = quad;
  out.bound = F.measure() * F.measure() / quad;
  out.holds = out.mu_up >= out.bound - 1e-9;
  return out;
}

KkWalkIdentity kk_walk_identity(const SetFamily& F) {
  require(F.k >= 1 && F.k < F.n, "kk_walk_identity: need 1 <= k < n");
  // lhs: x uniform on the k-level, B a uniform superset, y a uniform k-subset
  // of B; P[x in F, y not in F].
  std::vector<char> inF(1u << F.n, 0);
  for (std::uint32_t m : F.members) inF[m] = 1;
  double lhs = 0.0;
  for (std::uint32_t x : F.members) {
    for (int add = 0; add < F.n; ++add) {
      if (x & (1u << add)) continue;
      const std::uint32_t B = x | (1u << add);
      int exits = 0;
      for (int drop = 0; drop < F.n; ++drop)
        if (B & (1u << drop)) exits += 1 - inF[B & ~(1u << drop)];
      lhs += static_cast<double>(exits) / static_cast<double>(F.k + 1);
    }
  }
  lhs /= static_cast<double>(F.layer_size()) * static_cast<double>(F.n - F.k);

  const double I = ms_total_influence(family_indicator(F));
  const double n = F.n, k = F.k;
  KkWalkIdentity out;
  out.lhs = lhs;
  out.rhs = (k / (k + 1.0)) * (n * (n - 1.0) / (2.0 * k * (n - k))) * (1.0 / (2.0 * n)) * I;
  return out;
}

void write_family_file(const SetFamily& F, const std::string& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "write_family_file: cannot open");
  for (std::uint32_t m : F.members) {
    bool first = true;
    for (int v = 0; v < F.n; ++v)
      if (m & (1u << v)) {
        if (!first) os << ",";
        os << (v + 1);
        first = false;
      }
    os << "\n";
  }
}

SetFamily read_family_file(int n, int k, const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "read_family_file: cannot open");
  std::vector<std::uint32_t> members;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::uint32_t m = 0;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) m |= 1u << (std::stoi(tok) - 1);
    members.push_back(m);
  }
  return make_family(n, k, std::move(members));
}

void clear_multislice_caches() {
  auto& c = caches();
  std::lock_guard<std::mutex> lock(c.mu);
  c.projectors.clear();
}

}  // namespace snfa
