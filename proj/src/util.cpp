#include "snfa/util.hpp"

#include <cmath>

namespace snfa {

std::int64_t factorial(int n) {
  require(n >= 0 && n <= 20, "factorial: n out of range");
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::int64_t falling_factorial(int n, int k) {
  require(k >= 0 && k <= n, "falling_factorial: need 0 <= k <= n");
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (0xA3EC647659359ACDULL * (stream + 1));
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection from the top to avoid modulo bias; portable and exact.
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double pairwise_sum(const double* data, std::size_t len) {
  if (len <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += data[i];
    return s;
  }
  const std::size_t half = len / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, len - half);
}

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

std::vector<int> unrank_tuple(int n, int k, std::int64_t r) {
  require(k >= 0 && k <= n, "unrank_tuple: bad k");
  require(r >= 0 && r < falling_factorial(n, k), "unrank_tuple: rank range");
  std::vector<int> avail(n);
  for (int i = 0; i < n; ++i) avail[i] = i + 1;
  std::vector<int> out(k);
  for (int pos = 0; pos < k; ++pos) {
    const std::int64_t block = falling_factorial(n - pos - 1, k - pos - 1);
    const auto idx = static_cast<std::size_t>(r / block);
    r %= block;
    out[pos] = avail[idx];
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

std::int64_t rank_tuple(int n, const std::vector<int>& tuple) {
  const int k = static_cast<int>(tuple.size());
  require(k <= n, "rank_tuple: bad size");
  std::vector<int> avail(n);
  for (int i = 0; i < n; ++i) avail[i] = i + 1;
  std::int64_t r = 0;
  for (int pos = 0; pos < k; ++pos) {
    std::size_t idx = 0;
    while (idx < avail.size() && avail[idx] != tuple[pos]) ++idx;
    require(idx < avail.size(), "rank_tuple: not a tuple of distinct values");
    r += static_cast<std::int64_t>(idx) *
         falling_factorial(n - pos - 1, k - pos - 1);
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return r;
}

namespace {
// Regularized incomplete gamma, series branch (x < s + 1).
double gamma_p_series(double s, double x) {
  double sum = 1.0 / s;
  double term = sum;
  for (int k = 1; k < 1000; ++k) {
    term *= x / (s + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Continued-fraction branch (x >= s + 1), modified Lentz.
double gamma_q_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}
}  // namespace

double gamma_q(double s, double x) {
  require(s > 0.0 && x >= 0.0, "gamma_q: domain");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double chi2_tail(double dof, double x) { return gamma_q(dof / 2.0, x / 2.0); }

}  // namespace snfa
