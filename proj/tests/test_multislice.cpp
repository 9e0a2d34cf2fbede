#include "doctest.h"
#include "snfa/multislice.hpp"

#include <bit>
#include <cmath>
#include <set>

#include "snfa/degrees.hpp"
#include "snfa/walks.hpp"

using namespace snfa;

namespace snfa {
// difference helper used only by these tests
inline MultiSliceFunction operator-(const MultiSliceFunction& a, const MultiSliceFunction& b) {
  MultiSliceFunction out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}
}  // namespace snfa

namespace {
constexpr double kTol = 1e-9;

MultiSliceFunction random_ms(const MultiSlice& U, Rng& rng) {
  MultiSliceFunction h{U};
  for (auto& v : h.values) v = rng.normal();
  return h;
}
}  // namespace

TEST_CASE("multi-slice ranking round trip") {
  const MultiSlice U{5, {3, 2}};
  CHECK(U.size() == 10);
  std::set<std::vector<int>> seen;
  for (std::int64_t r = 0; r < U.size(); ++r) {
    const auto x = ms_unrank(U, r);
    CHECK(ms_rank(U, x) == r);
    seen.insert(x);
  }
  CHECK(seen.size() == 10);

  const MultiSlice U3{6, {2, 2, 2}};
  CHECK(U3.size() == 90);
  for (std::int64_t r = 0; r < U3.size(); ++r) CHECK(ms_rank(U3, ms_unrank(U3, r)) == r);
}

TEST_CASE("lift preserves L_p norms and means") {
  Rng rng(51);
  const MultiSlice U{5, {3, 2}};
  const MultiSliceFunction h = random_ms(U, rng);
  const SnFunction g = lift(h, canonical_blocks(U));
  for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0})
    CHECK(norm_q(g, p) == doctest::Approx(norm_q(h, p)).epsilon(1e-12));
  CHECK(mean(g) == doctest::Approx(mean(h)).epsilon(1e-12));

  // Constant lifts to constant.
  const SnFunction c = lift(MultiSliceFunction{U, 2.5}, canonical_blocks(U));
  for (double v : c.values) CHECK(v == 2.5);

  // U_{2,1} on n=3: lift of a point indicator has mean 1/3 (fibers of size
  // k_1! k_2! = 2).
  const MultiSlice U21{3, {2, 1}};
  MultiSliceFunction point{U21};
  point.values[0] = 1.0;
  CHECK(mean(lift(point, canonical_blocks(U21))) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("multi-slice projections: Parseval, juntas fixed, transfer identity") {
  Rng rng(52);
  const MultiSlice U{5, {3, 2}};
  const MultiSliceFunction h = random_ms(U, rng);

  // Parseval over levels.
  double parseval = 0.0;
  MultiSliceFunction sum{U};
  for (int d = 0; d <= U.n - 1; ++d) {
    const MultiSliceFunction part = ms_pure(h, d);
    parseval += norm2_sq(part);
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += part.values[i];
  }
  CHECK(parseval == doctest::Approx(norm2_sq(h)).epsilon(1e-9));
  for (std::size_t i = 0; i < sum.values.size(); ++i)
    CHECK(sum.values[i] == doctest::Approx(h.values[i]).epsilon(1e-8));

  // A 1-junta is fixed by the d=1 projection.
  MultiSliceFunction junta{U};
  for (std::int64_t r = 0; r < junta.size(); ++r)
    junta.values[static_cast<std::size_t>(r)] = (ms_unrank(U, r)[0] == 1) ? 1.0 : -0.5;
  CHECK(norm2(ms_project_le(junta, 1) - junta) < kTol);

  // Transfer identity (M h)^{=i} = M (h^{=i}) for d <= 2.
  const SnFunction g = lift(h, canonical_blocks(U));
  for (int i = 0; i <= 2; ++i) {
    const SnFunction lhs = pure_part(g, i);
    const SnFunction rhs = lift(ms_pure(h, i), canonical_blocks(U));
    CHECK(norm2(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("multi-slice globalness matches the lifted profile at d = 1") {
  Rng rng(53);
  const MultiSlice U{5, {3, 2}};
  const MultiSliceFunction h = random_ms(U, rng);
  const auto rows = ms_globalness(h, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].max_norm == doctest::Approx(norm2(h)));

  // Lifted side: restrictions T = {(i, r)} with block-resolved targets give
  // the same norms; the profile maxima agree.
  const SnFunction g = lift(h, canonical_blocks(U));
  double best = -1.0;
  const auto blocks = canonical_blocks(U);
  for (int i = 1; i <= U.n; ++i)
    for (int j = 0; j < U.colors(); ++j) {
      // any representative value in block j gives the same restriction norm
      const double nrm = norm2(restrict_to(g, PairSet{{i, blocks[static_cast<std::size_t>(j)][0]}}));
      best = std::max(best, nrm);
      const double ms_nrm = norm2(ms_restrict(h, {i}, {j + 1}));
      CHECK(nrm == doctest::Approx(ms_nrm).epsilon(1e-10));
    }
  CHECK(best == doctest::Approx(rows[1].max_norm).epsilon(1e-10));

  // Indicator of x_1 = 1 on U_{3,2}: the size-1 restriction attains 1.
  MultiSliceFunction dict{U};
  for (std::int64_t r = 0; r < dict.size(); ++r)
    dict.values[static_cast<std::size_t>(r)] = (ms_unrank(U, r)[0] == 1) ? 1.0 : 0.0;
  const auto drows = ms_globalness(dict, 1);
  CHECK(drows[1].max_norm == doctest::Approx(1.0));
}

TEST_CASE("multi-slice influences") {
  const MultiSlice U{5, {2, 3}};
  CHECK(ms_total_influence(MultiSliceFunction{U, 3.0}) == doctest::Approx(0.0));

  // Dictator 1[x_1 = 1] on U_{k, n-k}: I_1 = 2k(n-k)/(n(n-1)).
  MultiSliceFunction dict{U};
  for (std::int64_t r = 0; r < dict.size(); ++r)
    dict.values[static_cast<std::size_t>(r)] = (ms_unrank(U, r)[0] == 1) ? 1.0 : 0.0;
  const double k = 2, n = 5;
  CHECK(ms_influence(dict, 1) == doctest::Approx(2 * k * (n - k) / (n * (n - 1))));

  // Lift compatibility: total influence of the lift matches the slice value
  // (both are averages of the same squared Laplacians).
  Rng rng(54);
  const MultiSliceFunction h = random_ms(U, rng);
  const SnFunction g = lift(h, canonical_blocks(U));
  CHECK(total_influence(g) == doctest::Approx(ms_total_influence(h)).epsilon(1e-9));
}

TEST_CASE("upper shadows") {
  const SetFamily F = make_family(4, 2, {0b0011u});
  const SetFamily up = shadow_up(F);
  CHECK(up.members == std::vector<std::uint32_t>{0b0111u, 0b1011u});

  // Full layer maps onto the full layer above.
  std::vector<std::uint32_t> full;
  for (std::uint32_t m = 0; m < 16; ++m)
    if (std::popcount(m) == 2) full.push_back(m);
  CHECK(shadow_up(make_family(4, 2, full)).members.size() == 4);

  CHECK_THROWS(shadow_up(make_family(3, 3, {0b111u})));
}

TEST_CASE("generalized binomial and the Lovasz parameter") {
  CHECK(gen_binomial(5.0, 2) == doctest::Approx(10.0));
  CHECK(gen_binomial(4.0, 3) == doctest::Approx(4.0));
  for (double target : {1.0, 3.5, 10.0, 20.25}) {
    const double y = lovasz_parameter(3, target);
    CHECK(gen_binomial(y, 3) == doctest::Approx(target).epsilon(1e-9));
  }
}

TEST_CASE("Kruskal-Katona Lovasz bound, exhaustive on ([5],2)") {
  std::vector<std::uint32_t> layer;
  for (std::uint32_t m = 0; m < 32; ++m)
    if (std::popcount(m) == 2) layer.push_back(m);
  REQUIRE(layer.size() == 10);
  int families = 0;
  for (std::uint32_t mask = 1; mask < 1024; ++mask) {
    std::vector<std::uint32_t> members;
    for (int b = 0; b < 10; ++b)
      if (mask & (1u << b)) members.push_back(layer[static_cast<std::size_t>(b)]);
    const LovaszBound lb = kruskal_katona_check(make_family(5, 2, members));
    CHECK(lb.holds);
    ++families;
  }
  CHECK(families == 1023);

  // Tightness at a single set: |F| = 1 gives bound exactly 3.
  const LovaszBound one = kruskal_katona_check(make_family(5, 2, {0b00011u}));
  CHECK(one.bound == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(one.shadow == 3);
}

TEST_CASE("raising operator quadratic bound") {
  // Full layer: both sides 1.
  std::vector<std::uint32_t> full;
  for (std::uint32_t m = 0; m < 16; ++m)
    if (std::popcount(m) == 2) full.push_back(m);
  const RaisingBound rb = raising_quadratic(make_family(4, 2, full));
  CHECK(rb.mu_up == doctest::Approx(1.0));
  CHECK(rb.bound == doctest::Approx(1.0).epsilon(1e-12));

  // Single pair in ([4],2): mu(F up) = 2/4.
  const RaisingBound one = raising_quadratic(make_family(4, 2, {0b0011u}));
  CHECK(one.mu_up == doctest::Approx(0.5));
  CHECK(one.holds);

  // Exhaustive over ([5],2).
  std::vector<std::uint32_t> layer;
  for (std::uint32_t m = 0; m < 32; ++m)
    if (std::popcount(m) == 2) layer.push_back(m);
  for (std::uint32_t mask = 1; mask < 1024; ++mask) {
    std::vector<std::uint32_t> members;
    for (int b = 0; b < 10; ++b)
      if (mask & (1u << b)) members.push_back(layer[static_cast<std::size_t>(b)]);
    CHECK(raising_quadratic(make_family(5, 2, members)).holds);
  }
}

TEST_CASE("walk identity on set families") {
  // Full layer: nothing escapes.
  std::vector<std::uint32_t> full;
  for (std::uint32_t m = 0; m < 16; ++m)
    if (std::popcount(m) == 2) full.push_back(m);
  const KkWalkIdentity fullid = kk_walk_identity(make_family(4, 2, full));
  CHECK(fullid.lhs == doctest::Approx(0.0));
  CHECK(fullid.rhs == doctest::Approx(0.0));

  const KkWalkIdentity one = kk_walk_identity(make_family(4, 2, {0b0011u}));
  CHECK(one.lhs == doctest::Approx(one.rhs).epsilon(1e-10));

  Rng rng(55);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t m = 0; m < 64; ++m)
      if (std::popcount(m) == 3 && rng.bernoulli(0.4)) members.push_back(m);
    if (members.empty()) continue;
    const KkWalkIdentity id = kk_walk_identity(make_family(6, 3, members));
    CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-9));
  }
}

TEST_CASE("family file round trip") {
  Rng rng(56);
  std::vector<std::uint32_t> members;
  for (std::uint32_t m = 0; m < 128; ++m)
    if (std::popcount(m) == 3 && rng.bernoulli(0.3)) members.push_back(m);
  const SetFamily F = make_family(7, 3, members);
  write_family_file(F, "/tmp/snfa_family_test.txt");
  const SetFamily G = read_family_file(7, 3, "/tmp/snfa_family_test.txt");
  CHECK(G.members == F.members);
}
