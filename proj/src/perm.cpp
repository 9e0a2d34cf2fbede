#include "snfa/perm.hpp"

#include <algorithm>

namespace snfa {

Permutation::Permutation(std::vector<int> word) : word_(std::move(word)) {
  const int n = static_cast<int>(word_.size());
  require(n >= 1 && n <= kMaxN, "Permutation: n out of range (hard cap 10)");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int v : word_) {
    require(v >= 1 && v <= n, "Permutation: word value out of range");
    require(!seen[static_cast<std::size_t>(v)], "Permutation: word not a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  require(n >= 1 && n <= kMaxN, "identity: n out of range");
  std::vector<int> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = i + 1;
  return Permutation(std::move(w));
}

Permutation Permutation::transposition(int n, int a, int b) {
  require(a != b && a >= 1 && b >= 1 && a <= n && b <= n,
          "transposition: need distinct a, b in [n]");
  Permutation p = identity(n);
  std::swap(p.word_[static_cast<std::size_t>(a - 1)],
            p.word_[static_cast<std::size_t>(b - 1)]);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> w(word_.size());
  for (int i = 1; i <= n(); ++i) w[static_cast<std::size_t>((*this)(i)-1)] = i;
  return Permutation(std::move(w));
}

bool Permutation::is_identity() const {
  for (int i = 1; i <= n(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

int Permutation::parity() const {
  int inv = 0;
  const int m = n();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (word_[static_cast<std::size_t>(i)] > word_[static_cast<std::size_t>(j)]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

Permutation compose(const Permutation& tau, const Permutation& sigma) {
  require(tau.n() == sigma.n(), "compose: mismatched n");
  std::vector<int> w(static_cast<std::size_t>(tau.n()));
  for (int i = 1; i <= tau.n(); ++i)
    w[static_cast<std::size_t>(i - 1)] = tau(sigma(i));
  return Permutation(std::move(w));
}

std::int64_t rank(const Permutation& p) {
  const int n = p.n();
  std::int64_t r = 0;
  for (int i = 1; i <= n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j <= n; ++j)
      if (p(j) < p(i)) ++smaller;
    r += smaller * factorial(n - i);
  }
  return r;
}

Permutation unrank(int n, std::int64_t r) {
  require(n >= 1 && n <= kMaxN, "unrank: n out of range");
  require(r >= 0 && r < factorial(n), "unrank: rank out of range");
  std::vector<int> avail(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) avail[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> w(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) {
    const std::int64_t block = factorial(n - pos - 1);
    const auto idx = static_cast<std::size_t>(r / block);
    r %= block;
    w[static_cast<std::size_t>(pos)] = avail[idx];
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return Permutation(std::move(w));
}

std::vector<int> PairSet::firsts() const {
  std::vector<int> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.first);
  return v;
}

std::vector<int> PairSet::seconds() const {
  std::vector<int> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.second);
  return v;
}

bool PairSet::set_equal(const PairSet& other) const {
  if (pairs.size() != other.pairs.size()) return false;
  auto a = pairs, b = other.pairs;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

PairSet PairSet::canonical() const {
  PairSet c = *this;
  std::sort(c.pairs.begin(), c.pairs.end());
  return c;
}

bool is_consistent(const PairSet& T) {
  auto f = T.firsts();
  auto s = T.seconds();
  std::sort(f.begin(), f.end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(f.begin(), f.end()) == f.end() &&
         std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool respects(const Permutation& pi, const PairSet& T) {
  for (const auto& [i, j] : T.pairs)
    if (pi(i) != j) return false;
  return true;
}

namespace {
struct CosetFrame {
  std::vector<int> free_pos;  // ascending free positions
  std::vector<int> free_val;  // ascending free values
};

CosetFrame coset_frame(int n, const PairSet& T) {
  require(is_consistent(T), "coset: inconsistent pair set");
  require(T.size() <= n, "coset: |T| > n");
  std::vector<bool> pos_used(static_cast<std::size_t>(n) + 1, false);
  std::vector<bool> val_used(static_cast<std::size_t>(n) + 1, false);
  for (const auto& [i, j] : T.pairs) {
    require(i >= 1 && i <= n && j >= 1 && j <= n, "coset: pair out of range");
    pos_used[static_cast<std::size_t>(i)] = true;
    val_used[static_cast<std::size_t>(j)] = true;
  }
  CosetFrame fr;
  for (int i = 1; i <= n; ++i) {
    if (!pos_used[static_cast<std::size_t>(i)]) fr.free_pos.push_back(i);
    if (!val_used[static_cast<std::size_t>(i)]) fr.free_val.push_back(i);
  }
  return fr;
}
}  // namespace

std::int64_t coset_size(int n, const PairSet& T) {
  require(is_consistent(T), "coset_size: inconsistent pair set");
  return factorial(n - T.size());
}

Permutation coset_member(int n, const PairSet& T, std::int64_t reduced_rank) {
  const CosetFrame fr = coset_frame(n, T);
  const int m = static_cast<int>(fr.free_pos.size());
  const Permutation red = unrank(std::max(m, 1), m == 0 ? 0 : reduced_rank);
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : T.pairs) w[static_cast<std::size_t>(i - 1)] = j;
  for (int a = 0; a < m; ++a)
    w[static_cast<std::size_t>(fr.free_pos[static_cast<std::size_t>(a)] - 1)] =
        fr.free_val[static_cast<std::size_t>(red(a + 1) - 1)];
  return Permutation(std::move(w));
}

std::int64_t coset_reduced_rank(int n, const PairSet& T, const Permutation& pi) {
  require(respects(pi, T), "coset_reduced_rank: permutation not in coset");
  const CosetFrame fr = coset_frame(n, T);
  const int m = static_cast<int>(fr.free_pos.size());
  if (m == 0) return 0;
  std::vector<int> red(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const int v = pi(fr.free_pos[static_cast<std::size_t>(a)]);
    const auto it = std::lower_bound(fr.free_val.begin(), fr.free_val.end(), v);
    red[static_cast<std::size_t>(a)] =
        static_cast<int>(it - fr.free_val.begin()) + 1;
  }
  return rank(Permutation(std::move(red)));
}

void for_each_coset(int n, const PairSet& T,
                    const std::function<void(std::int64_t, const Permutation&)>& fn) {
  const CosetFrame fr = coset_frame(n, T);
  const int m = static_cast<int>(fr.free_pos.size());
  const std::int64_t sz = factorial(m);
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : T.pairs) w[static_cast<std::size_t>(i - 1)] = j;
  for (std::int64_t k = 0; k < sz; ++k) {
    const Permutation red = unrank(std::max(m, 1), m == 0 ? 0 : k);
    for (int a = 0; a < m; ++a)
      w[static_cast<std::size_t>(fr.free_pos[static_cast<std::size_t>(a)] - 1)] =
          fr.free_val[static_cast<std::size_t>(red(a + 1) - 1)];
    fn(k, Permutation(w));
  }
}

void enumerate_pair_sets(int n, int t, const std::function<void(const PairSet&)>& fn) {
  require(t >= 0 && t <= n, "enumerate_pair_sets: need 0 <= t <= n");
  const std::int64_t m = falling_factorial(n, t);
  for (std::int64_t a = 0; a < m; ++a) {
    const auto firsts = unrank_tuple(n, t, a);
    for (std::int64_t b = 0; b < m; ++b) {
      const auto seconds = unrank_tuple(n, t, b);
      PairSet T;
      for (int k = 0; k < t; ++k)
        T.push(firsts[static_cast<std::size_t>(k)], seconds[static_cast<std::size_t>(k)]);
      fn(T);
    }
  }
}

void enumerate_pair_sets_canonical(int n, int t,
                                   const std::function<void(const PairSet&)>& fn) {
  require(t >= 0 && t <= n, "enumerate_pair_sets_canonical: need 0 <= t <= n");
  std::vector<int> pos(static_cast<std::size_t>(t));
  // positions strictly increasing
  std::function<void(int, int)> rec_pos = [&](int idx, int start) {
    if (idx == t) {
      const std::int64_t m = falling_factorial(n, t);
      for (std::int64_t b = 0; b < m; ++b) {
        const auto seconds = unrank_tuple(n, t, b);
        PairSet T;
        for (int k = 0; k < t; ++k)
          T.push(pos[static_cast<std::size_t>(k)], seconds[static_cast<std::size_t>(k)]);
        fn(T);
      }
      return;
    }
    for (int i = start; i <= n; ++i) {
      pos[static_cast<std::size_t>(idx)] = i;
      rec_pos(idx + 1, i + 1);
    }
  };
  rec_pos(0, 1);
}

Permutation sample_uniform(int n, Rng& rng) {
  require(n >= 1 && n <= kMaxN, "sample_uniform: n out of range");
  std::vector<int> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = i + 1;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)]);
  }
  return Permutation(std::move(w));
}

Permutation sample_coset(int n, const PairSet& T, Rng& rng) {
  const std::int64_t sz = coset_size(n, T);
  return coset_member(n, T, static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(sz))));
}

}  // namespace snfa
