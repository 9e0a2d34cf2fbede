#include "snfa/fnspace.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace snfa {

SnFunction::SnFunction(int n_, double fill)
    : n(n_), values(static_cast<std::size_t>(factorial(n_)), fill) {
  require(n_ >= 1 && n_ <= kMaxN, "SnFunction: n out of range (hard cap 10)");
}

SnFunction operator+(const SnFunction& a, const SnFunction& b) {
  require(a.n == b.n, "SnFunction +: mismatched n");
  SnFunction r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
  return r;
}

SnFunction operator-(const SnFunction& a, const SnFunction& b) {
  require(a.n == b.n, "SnFunction -: mismatched n");
  SnFunction r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
  return r;
}

SnFunction operator*(double c, const SnFunction& f) {
  SnFunction r = f;
  for (auto& v : r.values) v *= c;
  return r;
}

namespace {
double table_mean(const std::vector<double>& v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double table_norm_q(const std::vector<double>& v, double q) {
  require(q >= 1.0, "norm_q: need q >= 1");
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = std::pow(std::fabs(v[i]), q);
  return std::pow(table_mean(p), 1.0 / q);
}

double table_norm2_sq(const std::vector<double>& v) {
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] * v[i];
  return table_mean(p);
}

double table_inner(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  return table_mean(p);
}
}  // namespace

double mean(const SnFunction& f) { return table_mean(f.values); }
double norm_q(const SnFunction& f, double q) { return table_norm_q(f.values, q); }
double norm2(const SnFunction& f) { return std::sqrt(table_norm2_sq(f.values)); }
double norm2_sq(const SnFunction& f) { return table_norm2_sq(f.values); }

double inner(const SnFunction& f, const SnFunction& g) {
  require(f.n == g.n, "inner: mismatched n");
  return table_inner(f.values, g.values);
}

double variance(const SnFunction& f) {
  const double m = mean(f);
  return norm2_sq(f) - m * m;
}

double norm_inf(const SnFunction& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::fabs(v));
  return m;
}

double mean(const CosetFunction& f) { return table_mean(f.values); }
double norm_q(const CosetFunction& f, double q) { return table_norm_q(f.values, q); }
double norm2(const CosetFunction& f) { return std::sqrt(table_norm2_sq(f.values)); }
double norm2_sq(const CosetFunction& f) { return table_norm2_sq(f.values); }

double inner(const CosetFunction& f, const CosetFunction& g) {
  require(f.base_n == g.base_n && f.T.set_equal(g.T),
          "inner(CosetFunction): different cosets");
  return table_inner(f.values, g.values);
}

CosetFunction restrict_to(const SnFunction& f, const PairSet& T) {
  require(is_consistent(T), "restrict_to: inconsistent T");
  CosetFunction out;
  out.base_n = f.n;
  out.T = T;
  out.values.resize(static_cast<std::size_t>(coset_size(f.n, T)));
  for_each_coset(f.n, T, [&](std::int64_t k, const Permutation& pi) {
    out.values[static_cast<std::size_t>(k)] = f.at(pi);
  });
  return out;
}

SnFunction as_sn_function(const CosetFunction& f) {
  SnFunction g(std::max(f.reduced_n(), 1));
  require(g.size() == f.size(), "as_sn_function: size mismatch");
  g.values = f.values;
  return g;
}

SnFunction act_left(const Permutation& tau, const SnFunction& f) {
  require(tau.n() == f.n, "act_left: mismatched n");
  SnFunction r(f.n);
  const std::int64_t m = f.size();
  for (std::int64_t i = 0; i < m; ++i)
    r[i] = f.at(compose(tau, unrank(f.n, i)));
  return r;
}

SnFunction act_right(const SnFunction& f, const Permutation& tau) {
  require(tau.n() == f.n, "act_right: mismatched n");
  SnFunction r(f.n);
  const std::int64_t m = f.size();
  for (std::int64_t i = 0; i < m; ++i)
    r[i] = f.at(compose(unrank(f.n, i), tau));
  return r;
}

SnFunction sign_fn(int n) {
  SnFunction r(n);
  for (std::int64_t i = 0; i < r.size(); ++i)
    r[i] = static_cast<double>(unrank(n, i).parity());
  return r;
}

SnFunction indicator(int n, const PairSet& T) {
  require(is_consistent(T), "indicator: inconsistent T");
  SnFunction r(n);
  for_each_coset(n, T, [&](std::int64_t, const Permutation& pi) {
    r[rank(pi)] = 1.0;
  });
  return r;
}

SnFunction v_T(int n, const PairSet& T) {
  SnFunction f = indicator(n, T);
  const double nrm = std::sqrt(static_cast<double>(coset_size(n, T)) /
                               static_cast<double>(factorial(n)));
  return (1.0 / nrm) * f;
}

SnFunction random_function(int n, Rng& rng) {
  SnFunction f(n);
  for (auto& v : f.values) v = rng.normal();
  return f;
}

SnFunction random_pm1_function(int n, Rng& rng) {
  SnFunction f(n);
  for (auto& v : f.values) v = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return f;
}

void write_csv(const SnFunction& f, std::ostream& os) {
  os << "rank,value\n";
  std::ostringstream line;
  line.precision(17);
  for (std::int64_t i = 0; i < f.size(); ++i) {
    line.str("");
    line << i << "," << f[i] << "\n";
    os << line.str();
  }
}

SnFunction read_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "read_csv: empty input");
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, "read_csv: malformed line");
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  int n = 1;
  while (n <= kMaxN && factorial(n) != static_cast<std::int64_t>(vals.size())) ++n;
  require(n <= kMaxN, "read_csv: length is not a factorial");
  SnFunction f(n);
  f.values = std::move(vals);
  return f;
}

namespace {
void put_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 4);
}
std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  require(static_cast<bool>(is), "read_binary: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}
void put_f64_le(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 8);
}
double get_f64_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  require(static_cast<bool>(is), "read_binary: truncated payload");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}
}  // namespace

void write_binary(const SnFunction& f, std::ostream& os) {
  put_u32_le(os, static_cast<std::uint32_t>(f.n));
  put_u32_le(os, static_cast<std::uint32_t>(f.size()));
  for (double v : f.values) put_f64_le(os, v);
}

SnFunction read_binary(std::istream& is) {
  const auto n = static_cast<int>(get_u32_le(is));
  const auto len = get_u32_le(is);
  SnFunction f(n);
  require(static_cast<std::int64_t>(len) == f.size(), "read_binary: bad length");
  for (auto& v : f.values) v = get_f64_le(is);
  return f;
}

void write_csv_file(const SnFunction& f, const std::string& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "write_csv_file: cannot open");
  write_csv(f, os);
}

SnFunction read_csv_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "read_csv_file: cannot open");
  return read_csv(is);
}

void write_binary_file(const SnFunction& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "write_binary_file: cannot open");
  write_binary(f, os);
}

SnFunction read_binary_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "read_binary_file: cannot open");
  return read_binary(is);
}

}  // namespace snfa
