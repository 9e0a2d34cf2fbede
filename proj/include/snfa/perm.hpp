#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "snfa/util.hpp"

namespace snfa {

// A permutation of [n] = {1,...,n}, stored as the 1-indexed word
// (pi(1),...,pi(n)).  Ranking follows Lehmer codes in lexicographic order of
// words, so rank(identity) = 0 and rank/unrank are mutually inverse.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> word);

  static Permutation identity(int n);
  // The transposition (a b); a != b.
  static Permutation transposition(int n, int a, int b);

  int n() const { return static_cast<int>(word_.size()); }
  // pi(i), 1-based.
  int operator()(int i) const { return word_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<int>& word() const { return word_; }

  Permutation inverse() const;
  bool is_identity() const;
  // +1 for even permutations, -1 for odd.
  int parity() const;

  bool operator==(const Permutation& o) const = default;

 private:
  std::vector<int> word_;
};

// (tau o sigma)(i) = tau(sigma(i)).
Permutation compose(const Permutation& tau, const Permutation& sigma);

std::int64_t rank(const Permutation& p);
Permutation unrank(int n, std::int64_t r);

// An ordered list ((i_1,j_1),...,(i_t,j_t)) of constraints pi(i_k) = j_k.
// Consistent when all i's are distinct and all j's are distinct.
struct PairSet {
  std::vector<std::pair<int, int>> pairs;

  PairSet() = default;
  PairSet(std::initializer_list<std::pair<int, int>> init) : pairs(init) {}
  explicit PairSet(std::vector<std::pair<int, int>> p) : pairs(std::move(p)) {}

  int size() const { return static_cast<int>(pairs.size()); }
  bool empty() const { return pairs.empty(); }
  void push(int i, int j) { pairs.emplace_back(i, j); }

  std::vector<int> firsts() const;
  std::vector<int> seconds() const;

  // Order-insensitive equality of the underlying pair sets.
  bool set_equal(const PairSet& other) const;
  // Sorted-by-first copy, used as the canonical representative.
  PairSet canonical() const;

  bool operator==(const PairSet& o) const = default;
};

bool is_consistent(const PairSet& T);

// Does pi satisfy every constraint of T?
bool respects(const Permutation& pi, const PairSet& T);

// The double coset S_n^T is identified with S_{n - |T|} by deleting the
// constrained positions and relabeling: free positions and free values are
// taken in increasing order.  coset_member(n, T, k) is the element matching
// the reduced permutation of rank k; coset_reduced_rank inverts it.
std::int64_t coset_size(int n, const PairSet& T);
Permutation coset_member(int n, const PairSet& T, std::int64_t reduced_rank);
std::int64_t coset_reduced_rank(int n, const PairSet& T, const Permutation& pi);
void for_each_coset(int n, const PairSet& T,
                    const std::function<void(std::int64_t reduced_rank,
                                             const Permutation&)>& fn);

// All ordered consistent pair lists of size t; count = (n!/(n-t)!)^2.
void enumerate_pair_sets(int n, int t, const std::function<void(const PairSet&)>& fn);
// One representative per pair *set*: positions strictly increasing, targets
// an arbitrary ordered tuple of distinct values; count = C(n,t) * n!/(n-t)!.
void enumerate_pair_sets_canonical(int n, int t,
                                   const std::function<void(const PairSet&)>& fn);

Permutation sample_uniform(int n, Rng& rng);
Permutation sample_coset(int n, const PairSet& T, Rng& rng);

}  // namespace snfa
