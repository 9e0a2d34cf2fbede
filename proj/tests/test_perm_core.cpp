#include "doctest.h"
#include "snfa/perm.hpp"

#include <cmath>

#include <map>
#include <set>

using namespace snfa;

TEST_CASE("rank/unrank follow lexicographic order") {
  CHECK(rank(Permutation::identity(3)) == 0);
  const Permutation p = unrank(3, 5);
  CHECK(p.word() == std::vector<int>{3, 2, 1});
  CHECK_THROWS(unrank(3, 6));
  CHECK_THROWS(unrank(3, -1));
}

TEST_CASE("rank/unrank round trip, exhaustive for n <= 6") {
  for (int n = 1; n <= 6; ++n)
    for (std::int64_t r = 0; r < factorial(n); ++r)
      CHECK(rank(unrank(n, r)) == r);
}

TEST_CASE("composition") {
  Rng rng(17);
  const Permutation id4 = Permutation::identity(4);
  for (int rep = 0; rep < 20; ++rep) {
    const Permutation s = sample_uniform(4, rng);
    CHECK(compose(id4, s) == s);
    CHECK(compose(s, id4) == s);
  }
  const Permutation t = Permutation::transposition(4, 1, 2);
  CHECK(compose(t, t).is_identity());
  // (tau sigma)(i) = tau(sigma(i)): hand case on S_3.
  const Permutation tau({2, 3, 1});
  const Permutation sigma({3, 1, 2});
  CHECK(compose(tau, sigma).is_identity());
  CHECK_THROWS(compose(tau, id4));
}

TEST_CASE("composition is associative with two-sided unit, exhaustive n <= 4") {
  for (int n = 2; n <= 4; ++n) {
    const std::int64_t N = factorial(n);
    for (std::int64_t a = 0; a < N; ++a)
      for (std::int64_t b = 0; b < N; ++b) {
        const Permutation pa = unrank(n, a), pb = unrank(n, b);
        for (std::int64_t c = 0; c < N; ++c) {
          const Permutation pc = unrank(n, c);
          CHECK(compose(compose(pa, pb), pc) == compose(pa, compose(pb, pc)));
        }
      }
  }
}

TEST_CASE("pair set consistency") {
  CHECK(is_consistent(PairSet{}));
  CHECK_FALSE(is_consistent(PairSet{{1, 2}, {2, 2}}));
  CHECK(is_consistent(PairSet{{1, 2}, {2, 1}}));
}

TEST_CASE("coset enumeration") {
  // n=4, T={(1,1)}: filter oracle.
  std::set<std::int64_t> from_filter;
  for (std::int64_t r = 0; r < factorial(4); ++r)
    if (unrank(4, r)(1) == 1) from_filter.insert(r);
  std::set<std::int64_t> from_coset;
  for_each_coset(4, PairSet{{1, 1}}, [&](std::int64_t, const Permutation& pi) {
    from_coset.insert(rank(pi));
  });
  CHECK(from_coset.size() == 6);
  CHECK(from_coset == from_filter);

  // T = empty: everything.
  std::int64_t count = 0;
  for_each_coset(4, PairSet{}, [&](std::int64_t, const Permutation&) { ++count; });
  CHECK(count == factorial(4));

  // |T| = n: a single permutation.
  const PairSet full{{1, 2}, {2, 1}, {3, 3}};
  CHECK(coset_size(3, full) == 1);
  CHECK(coset_member(3, full, 0).word() == std::vector<int>{2, 1, 3});

  CHECK_THROWS(coset_size(3, PairSet{{1, 1}, {1, 2}}));
}

TEST_CASE("|coset(T)| = (n-|T|)! and membership, n <= 6, |T| <= 3") {
  for (int n = 3; n <= 6; ++n) {
    for (int t = 0; t <= 3 && t <= n; ++t) {
      int checked = 0;
      enumerate_pair_sets_canonical(n, t, [&](const PairSet& T) {
        if (++checked > 40) return;  // sample within each size class
        std::int64_t count = 0;
        for_each_coset(n, T, [&](std::int64_t, const Permutation& pi) {
          CHECK(respects(pi, T));
          ++count;
        });
        CHECK(count == factorial(n - t));
      });
    }
  }
}

TEST_CASE("coset reduced rank inverts coset_member") {
  const PairSet T{{2, 4}, {4, 1}};
  for (std::int64_t k = 0; k < coset_size(5, T); ++k)
    CHECK(coset_reduced_rank(5, T, coset_member(5, T, k)) == k);
}

TEST_CASE("enumerate_pair_sets counts") {
  int c = 0;
  enumerate_pair_sets(3, 1, [&](const PairSet&) { ++c; });
  CHECK(c == 9);
  c = 0;
  enumerate_pair_sets(3, 3, [&](const PairSet& T) {
    CHECK(is_consistent(T));
    ++c;
  });
  CHECK(c == 36);
  c = 0;
  enumerate_pair_sets(4, 0, [&](const PairSet& T) {
    CHECK(T.empty());
    ++c;
  });
  CHECK(c == 1);
}

TEST_CASE("uniform sampling frequencies on S_3") {
  Rng rng(2024);
  std::map<std::int64_t, int> freq;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) freq[rank(sample_uniform(3, rng))]++;
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(p * (1 - p) * draws);
  for (std::int64_t r = 0; r < 6; ++r)
    CHECK(std::fabs(freq[r] - draws * p) <= 4.0 * sigma);
}

TEST_CASE("coset sampling: chi-square goodness of fit on S_4^{(1,1)}") {
  Rng rng(7);
  const PairSet T{{1, 1}};
  std::map<std::int64_t, int> freq;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Permutation pi = sample_coset(4, T, rng);
    REQUIRE(pi(1) == 1);
    freq[rank(pi)]++;
  }
  const double expected = draws / 6.0;
  double chi2 = 0.0;
  for (const auto& [r, c] : freq) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(freq.size() == 6);
  CHECK(chi2_tail(5.0, chi2) > 1e-3);

  // |T| = n returns the unique element.
  const PairSet full{{1, 3}, {2, 2}, {3, 1}};
  CHECK(sample_coset(3, full, rng).word() == std::vector<int>{3, 2, 1});
}

TEST_CASE("parity") {
  CHECK(Permutation::identity(4).parity() == 1);
  CHECK(Permutation::transposition(4, 2, 4).parity() == -1);
  Rng rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const Permutation a = sample_uniform(5, rng), b = sample_uniform(5, rng);
    CHECK(compose(a, b).parity() == a.parity() * b.parity());
  }
}

TEST_CASE("hard cap n <= 10 fails fast") {
  std::vector<int> w(11);
  for (int i = 0; i < 11; ++i) w[static_cast<std::size_t>(i)] = i + 1;
  CHECK_THROWS(Permutation(w));
}
