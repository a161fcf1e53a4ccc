#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace lbjet {

/// Multiindex (alpha_1, ..., alpha_n) of non-negative derivative counts.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : a_(n, 0) {}
  MultiIndex(std::initializer_list<int> values) : a_(values) {}
  explicit MultiIndex(std::vector<int> values);

  /// The unit multiindex with a single 1 in direction `i` (1-based).
  static MultiIndex unit(std::size_t n, int i);
  static MultiIndex zero(std::size_t n) { return MultiIndex(n); }

  std::size_t dim() const { return a_.size(); }
  int order() const;
  int operator[](std::size_t i) const { return a_[i]; }
  const std::vector<int>& values() const { return a_; }

  MultiIndex operator+(const MultiIndex& other) const;
  /// Adds one in direction `i` (1-based).
  MultiIndex raised(int i) const;
  /// Subtracts one in direction `i`; requires alpha_i > 0.
  MultiIndex lowered(int i) const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Graded: order first, then reverse-lexicographic on the entries.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<int> a_;
};

/// A multipair (L, alpha): target component L in 1..m and multiindex alpha.
struct MultiPair {
  int component = 1;
  MultiIndex alpha;

  std::string to_string() const;
  friend bool operator==(const MultiPair&, const MultiPair&) = default;
  friend std::strong_ordering operator<=>(const MultiPair& a, const MultiPair& b);
};

/// Finite set of multipairs. Always contains (L, 0) for every L in 1..m.
class MultiPairSet {
 public:
  MultiPairSet(std::size_t n, int m);

  void insert(const MultiPair& p);
  bool contains(const MultiPair& p) const { return pairs_.count(p) != 0; }
  std::size_t size() const { return pairs_.size(); }
  /// sup |alpha| over members.
  int order() const { return order_; }
  std::size_t dim() const { return n_; }
  int components() const { return m_; }

  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  friend bool operator==(const MultiPairSet& a, const MultiPairSet& b) { return a.pairs_ == b.pairs_; }

 private:
  std::size_t n_;
  int m_;
  int order_ = 0;
  std::set<MultiPair> pairs_;
};

/// All multiindices of dimension n and order exactly k, in ascending order.
std::vector<MultiIndex> multi_indices_of_order(std::size_t n, int k);

/// All multiindices of dimension n with order <= k, graded ascending.
std::vector<MultiIndex> multi_indices_up_to(std::size_t n, int k);

/// A^[l]: A closed under l rounds of alpha -> alpha + i for every direction i.
MultiPairSet prolong_set(const MultiPairSet& a, int rounds);

}  // namespace lbjet
