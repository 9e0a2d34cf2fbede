#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "snfa/perm.hpp"
#include "snfa/util.hpp"

namespace snfa {

// A real-valued function on S_n under the uniform measure, stored densely by
// permutation rank.  All norms and inner products are expectation norms.
struct SnFunction {
  int n = 0;
  std::vector<double> values;

  SnFunction() = default;
  SnFunction(int n_, double fill = 0.0);

  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
  double& operator[](std::int64_t r) { return values[static_cast<std::size_t>(r)]; }
  double operator[](std::int64_t r) const { return values[static_cast<std::size_t>(r)]; }
  double at(const Permutation& p) const { return values[static_cast<std::size_t>(rank(p))]; }
};

SnFunction operator+(const SnFunction& a, const SnFunction& b);
SnFunction operator-(const SnFunction& a, const SnFunction& b);
SnFunction operator*(double c, const SnFunction& f);

// The restriction f_{->T} : S_n^T -> R, stored by reduced rank (the
// identification of S_n^T with S_{n-|T|}; see coset_member).  Carries the
// uniform measure on the coset.
struct CosetFunction {
  int base_n = 0;
  PairSet T;
  std::vector<double> values;

  int reduced_n() const { return base_n - T.size(); }
  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
};

double mean(const SnFunction& f);
// ||f||_q = E[|f|^q]^(1/q), q >= 1.
double norm_q(const SnFunction& f, double q);
double norm2(const SnFunction& f);
double norm2_sq(const SnFunction& f);
double inner(const SnFunction& f, const SnFunction& g);
double variance(const SnFunction& f);
double norm_inf(const SnFunction& f);

double mean(const CosetFunction& f);
double norm_q(const CosetFunction& f, double q);
double norm2(const CosetFunction& f);
double norm2_sq(const CosetFunction& f);
double inner(const CosetFunction& f, const CosetFunction& g);

CosetFunction restrict_to(const SnFunction& f, const PairSet& T);
// Reinterpret the restriction as a function on S_{n-|T|}.
SnFunction as_sn_function(const CosetFunction& f);

// Left action ^tau f (sigma) = f(tau o sigma); right action f^tau (sigma) =
// f(sigma o tau).  Both are measure preserving.
SnFunction act_left(const Permutation& tau, const SnFunction& f);
SnFunction act_right(const SnFunction& f, const Permutation& tau);

SnFunction sign_fn(int n);
// Indicator of the double coset S_n^T.
SnFunction indicator(int n, const PairSet& T);
// v_T = 1_T / ||1_T||_2.
SnFunction v_T(int n, const PairSet& T);

SnFunction random_function(int n, Rng& rng);           // iid standard normals
SnFunction random_pm1_function(int n, Rng& rng);       // iid signs

// CSV (rank,value) and dense little-endian binary with an 8-byte header
// (uint32 n, uint32 length).
void write_csv(const SnFunction& f, std::ostream& os);
SnFunction read_csv(std::istream& is);
void write_binary(const SnFunction& f, std::ostream& os);
SnFunction read_binary(std::istream& is);
void write_csv_file(const SnFunction& f, const std::string& path);
SnFunction read_csv_file(const std::string& path);
void write_binary_file(const SnFunction& f, const std::string& path);
SnFunction read_binary_file(const std::string& path);

}  // namespace snfa
