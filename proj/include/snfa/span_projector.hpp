#pragma once

#include <cstdint>
#include <vector>

#include "snfa/util.hpp"

namespace snfa {

// Orthogonal projector onto the span of a family of 0/1 indicator columns
// over a finite uniform probability space of given size.  Columns are given
// by sorted support index lists and are typically linearly dependent; the
// projector selects a maximal independent subset by on-the-fly pivoted
// Cholesky of the Gram matrix (rank revealed by a drop tolerance) and then
// projects by solving the normal equations on the selected columns.
class SpanProjector {
 public:
  SpanProjector(std::int64_t space_size,
                std::vector<std::vector<std::int32_t>> supports,
                double drop_tol = 1e-10);

  int rank() const { return rank_; }
  std::int64_t space_size() const { return space_size_; }
  const std::vector<int>& pivots() const { return pivots_; }

  std::vector<double> project(const std::vector<double>& f) const;

  // Least-squares coefficients over the pivot columns for a given target.
  std::vector<double> pivot_coefficients(const std::vector<double>& f) const;

 private:
  std::int64_t space_size_ = 0;
  std::vector<std::vector<std::int32_t>> supports_;
  int rank_ = 0;
  std::vector<int> pivots_;
  // Lower-triangular Cholesky factor of the pivot Gram block, row-major,
  // rank_ x rank_.
  std::vector<double> chol_;
};

}  // namespace snfa
