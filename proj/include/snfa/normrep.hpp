#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snfa/fnspace.hpp"

namespace snfa {

// Per-level coefficient tables a_k(I, J) over ordered k-tuples of distinct
// indices, indexed by (rank_tuple(I) * n_k + rank_tuple(J)).  A representation
// is normalized (zero flux) when every single-slot row/column average
// vanishes and the table is symmetric under simultaneous slot reindexing.
struct NormalizedRep {
  int n = 0;
  std::vector<std::vector<double>> levels;  // levels[k], k = 0..d

  int top_level() const { return static_cast<int>(levels.size()) - 1; }
};

NormalizedRep operator+(const NormalizedRep& a, const NormalizedRep& b);
NormalizedRep operator*(double c, const NormalizedRep& rep);

// f = sum_k sum_{I,J} a_k(I,J) 1_{I->J}.
SnFunction evaluate(const NormalizedRep& rep);
SnFunction evaluate_level(const NormalizedRep& rep, int k);

struct NormalizeOptions {
  double tol = 1e-9;
  // Assert the change-of-coefficients claims after every update step.
  bool instrument = false;
};

// Top-down normalization: at each level t the residual is written in the
// ordered spanning set by a minimum-norm solve, the row then column updates
//   b(I,J) = a(I,J) - (1/(n-t+1)) sum_{i not in I minus slot r} a(I[r<-i], J)
// enforce the zero-flux relations, the table is symmetrized by averaging over
// simultaneous reindexings, and the discarded part joins the level-(t-1)
// residual.  Requires f in V_d within tol.
NormalizedRep normalize(const SnFunction& f, int d, const NormalizeOptions& opts = {});

struct RelationViolations {
  double row = 0.0;
  double column = 0.0;
  double symmetry = 0.0;

  double max() const { return std::max(row, std::max(column, symmetry)); }
};
RelationViolations relation_violations(const NormalizedRep& rep);

// Both sides of the long-sum/short-sum identity at level r:
//   sum_{T in ([n] \ I)_t} a(R o T, J) = (-1)^t sum_{T in (I \ R)_t} a(R o T, J).
struct ClaimAux {
  double lhs = 0.0;
  double rhs = 0.0;
};
ClaimAux check_claim_aux(const NormalizedRep& rep, int r, int t,
                         const std::vector<int>& R, const std::vector<int>& I,
                         const std::vector<int>& J);

// I_{S,T}[f] = sum_{r>=0} sum_{I,J} (r+s)!^2 n^{-(r+s)} a(S o I, T o J)^2.
double analytic_influence(const NormalizedRep& rep, const std::vector<int>& S,
                          const std::vector<int>& T);

struct InfluenceEntry {
  std::vector<int> S, T;
  double value;
};
struct InfluenceTable {
  std::vector<InfluenceEntry> entries;
  double max_value = 0.0;
  std::vector<int> argmax_S, argmax_T;
};
InfluenceTable influence_table(const NormalizedRep& rep);

bool is_analytically_global(const NormalizedRep& rep, double eps,
                            InfluenceEntry* witness = nullptr);

// lhs = E[f^4] by enumeration; rhs = sum_{|S|=|T|} (4/n)^{|S|} I_{S,T}^2 per
// the stated constant, rhs_3p with the p-biased input's (3p)^{|S|} variant.
struct Hyp4Result {
  double lhs;
  double rhs;
  double rhs_3p;
};
Hyp4Result hyp4_check(const NormalizedRep& rep);

// ||g||_4^4 of the p-biased lift (p = 1/n) of a homogeneous level-d rep,
// via the 4-fold coefficient sum with exact biased-bit moments.  Throws when
// (#nonzero coefficients)^4 exceeds the budget.
double lifted_fourth_moment(const NormalizedRep& rep, int d,
                            std::int64_t budget = 400000000);

// JSON rows {level, I, J, coefficient}; zero entries are skipped.
std::string rep_to_json(const NormalizedRep& rep);

}  // namespace snfa
