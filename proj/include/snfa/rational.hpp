#pragma once
#if defined(SNFA_WITH_GMP)

#include <gmpxx.h>

#include <vector>

#include "snfa/fnspace.hpp"

namespace snfa {

// Exact-rational oracle path, intended for n <= 5 certification runs: the
// level decomposition is recomputed over Q and its identities checked with
// zero tolerance.
struct RationalDecomposition {
  std::vector<std::vector<mpq_class>> parts;  // level -> table of length n!
  bool parseval_exact = false;                // sum ||f^{=d}||^2 == ||f||^2
  bool orthogonal_exact = false;              // pairwise inner products == 0
  bool sum_exact = false;                     // parts sum back to f
};

// f is consumed as exact rationals (dyadic doubles convert exactly).
RationalDecomposition rational_decompose(const SnFunction& f);

// Max |double-path value - exact value| over all levels and entries.
double rational_vs_double_gap(const SnFunction& f);

}  // namespace snfa

#endif  // SNFA_WITH_GMP
