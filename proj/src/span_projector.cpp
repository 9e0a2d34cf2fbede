#include "snfa/span_projector.hpp"

#include <algorithm>
#include <cmath>

namespace snfa {

SpanProjector::SpanProjector(std::int64_t space_size,
                             std::vector<std::vector<std::int32_t>> supports,
                             double drop_tol)
    : space_size_(space_size), supports_(std::move(supports)) {
  const int N = static_cast<int>(supports_.size());
  require(N > 0, "SpanProjector: no columns");
  const double inv = 1.0 / static_cast<double>(space_size_);

  std::vector<double> diag(static_cast<std::size_t>(N));
  double max_diag0 = 0.0;
  for (int i = 0; i < N; ++i) {
    diag[static_cast<std::size_t>(i)] =
        static_cast<double>(supports_[static_cast<std::size_t>(i)].size()) * inv;
    max_diag0 = std::max(max_diag0, diag[static_cast<std::size_t>(i)]);
  }
  const double tol = drop_tol * max_diag0;

  // L: one length-N column per accepted pivot.
  std::vector<std::vector<double>> L;
  std::vector<char> used(static_cast<std::size_t>(N), 0);
  std::vector<char> mark(static_cast<std::size_t>(space_size_), 0);

  while (true) {
    int p = -1;
    double best = tol;
    for (int i = 0; i < N; ++i) {
      if (!used[static_cast<std::size_t>(i)] && diag[static_cast<std::size_t>(i)] > best) {
        best = diag[static_cast<std::size_t>(i)];
        p = i;
      }
    }
    if (p < 0) break;

    // Gram column of pivot p: <c_i, c_p> = |S_i cap S_p| / space_size.
    for (std::int32_t s : supports_[static_cast<std::size_t>(p)]) mark[static_cast<std::size_t>(s)] = 1;
    std::vector<double> col(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      if (used[static_cast<std::size_t>(i)]) { col[static_cast<std::size_t>(i)] = 0.0; continue; }
      std::int64_t hits = 0;
      for (std::int32_t s : supports_[static_cast<std::size_t>(i)])
        hits += mark[static_cast<std::size_t>(s)];
      col[static_cast<std::size_t>(i)] = static_cast<double>(hits) * inv;
    }
    for (std::int32_t s : supports_[static_cast<std::size_t>(p)]) mark[static_cast<std::size_t>(s)] = 0;

    const auto k = L.size();
    for (std::size_t j = 0; j < k; ++j) {
      const double lpj = L[j][static_cast<std::size_t>(p)];
      if (lpj == 0.0) continue;
      const auto& Lj = L[j];
      for (int i = 0; i < N; ++i) col[static_cast<std::size_t>(i)] -= Lj[static_cast<std::size_t>(i)] * lpj;
    }
    const double piv = std::sqrt(std::max(col[static_cast<std::size_t>(p)], tol));
    for (int i = 0; i < N; ++i) col[static_cast<std::size_t>(i)] /= piv;
    col[static_cast<std::size_t>(p)] = piv;

    used[static_cast<std::size_t>(p)] = 1;
    pivots_.push_back(p);
    L.push_back(std::move(col));
    // Update residual diagonal.
    for (int i = 0; i < N; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double v = L.back()[static_cast<std::size_t>(i)];
      diag[static_cast<std::size_t>(i)] -= v * v;
    }
  }

  rank_ = static_cast<int>(pivots_.size());
  require(rank_ > 0, "SpanProjector: zero rank");
  chol_.assign(static_cast<std::size_t>(rank_) * static_cast<std::size_t>(rank_), 0.0);
  for (int r = 0; r < rank_; ++r)
    for (int c = 0; c <= r; ++c)
      chol_[static_cast<std::size_t>(r) * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(c)] =
          L[static_cast<std::size_t>(c)][static_cast<std::size_t>(pivots_[static_cast<std::size_t>(r)])];
}

std::vector<double> SpanProjector::pivot_coefficients(const std::vector<double>& f) const {
  require(static_cast<std::int64_t>(f.size()) == space_size_,
          "SpanProjector: wrong input length");
  const double inv = 1.0 / static_cast<double>(space_size_);
  std::vector<double> b(static_cast<std::size_t>(rank_));
  for (int r = 0; r < rank_; ++r) {
    const auto& sup = supports_[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(r)])];
    double s = 0.0;
    for (std::int32_t idx : sup) s += f[static_cast<std::size_t>(idx)];
    b[static_cast<std::size_t>(r)] = s * inv;
  }
  // Forward then backward substitution with the Cholesky factor.
  for (int r = 0; r < rank_; ++r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int c = 0; c < r; ++c)
      s -= chol_[static_cast<std::size_t>(r) * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(c)] *
           b[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(r)] = s / chol_[static_cast<std::size_t>(r) * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(r)];
  }
  for (int r = rank_ - 1; r >= 0; --r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < rank_; ++c)
      s -= chol_[static_cast<std::size_t>(c) * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(r)] *
           b[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(r)] = s / chol_[static_cast<std::size_t>(r) * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(r)];
  }
  return b;
}

std::vector<double> SpanProjector::project(const std::vector<double>& f) const {
  const std::vector<double> y = pivot_coefficients(f);
  std::vector<double> out(static_cast<std::size_t>(space_size_), 0.0);
  for (int r = 0; r < rank_; ++r) {
    const double yr = y[static_cast<std::size_t>(r)];
    if (yr == 0.0) continue;
    for (std::int32_t idx : supports_[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(r)])])
      out[static_cast<std::size_t>(idx)] += yr;
  }
  return out;
}

}  // namespace snfa
