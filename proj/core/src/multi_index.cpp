#include "lbjet/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace lbjet {

MultiIndex::MultiIndex(std::vector<int> values) : a_(std::move(values)) {
  for (int v : a_) {
    if (v < 0) throw std::invalid_argument("multiindex entries must be non-negative");
  }
}

MultiIndex MultiIndex::unit(std::size_t n, int i) {
  if (i < 1 || static_cast<std::size_t>(i) > n) throw std::out_of_range("direction out of range");
  MultiIndex m(n);
  m.a_[i - 1] = 1;
  return m;
}

int MultiIndex::order() const { return std::accumulate(a_.begin(), a_.end(), 0); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("multiindex dimension mismatch");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += other.a_[i];
  return r;
}

MultiIndex MultiIndex::raised(int i) const {
  if (i < 1 || static_cast<std::size_t>(i) > dim()) throw std::out_of_range("direction out of range");
  MultiIndex r(*this);
  ++r.a_[i - 1];
  return r;
}

MultiIndex MultiIndex::lowered(int i) const {
  if (i < 1 || static_cast<std::size_t>(i) > dim() || a_[i - 1] == 0) {
    throw std::out_of_range("cannot lower multiindex in this direction");
  }
  MultiIndex r(*this);
  --r.a_[i - 1];
  return r;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a_[i]);
  }
  return s + ")";
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  // Within one order, (2,0) sorts before (1,1) before (0,2).
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i] != b[i]) return b[i] <=> a[i];
  }
  return std::strong_ordering::equal;
}

std::string MultiPair::to_string() const {
  return "(" + std::to_string(component) + "," + alpha.to_string() + ")";
}

std::strong_ordering operator<=>(const MultiPair& a, const MultiPair& b) {
  if (auto c = a.component <=> b.component; c != 0) return c;
  return a.alpha <=> b.alpha;
}

MultiPairSet::MultiPairSet(std::size_t n, int m) : n_(n), m_(m) {
  if (m < 1) throw std::invalid_argument("need at least one target component");
  for (int l = 1; l <= m; ++l) pairs_.insert(MultiPair{l, MultiIndex::zero(n)});
}

void MultiPairSet::insert(const MultiPair& p) {
  if (p.component < 1 || p.component > m_) throw std::out_of_range("multipair component out of range");
  if (p.alpha.dim() != n_) throw std::invalid_argument("multipair dimension mismatch");
  pairs_.insert(p);
  order_ = std::max(order_, p.alpha.order());
}

static void enumerate(std::size_t n, int remaining, std::vector<int>& cur, std::size_t pos,
                      std::vector<MultiIndex>& out) {
  if (pos + 1 == n) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    enumerate(n, remaining - v, cur, pos + 1, out);
  }
}

std::vector<MultiIndex> multi_indices_of_order(std::size_t n, int k) {
  std::vector<MultiIndex> out;
  if (n == 0 || k < 0) return out;
  std::vector<int> cur(n, 0);
  enumerate(n, k, cur, 0, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t n, int k) {
  std::vector<MultiIndex> out;
  for (int j = 0; j <= k; ++j) {
    auto layer = multi_indices_of_order(n, j);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

MultiPairSet prolong_set(const MultiPairSet& a, int rounds) {
  if (rounds < 0) throw std::invalid_argument("prolongation rounds must be >= 0");
  MultiPairSet cur = a;
  for (int r = 0; r < rounds; ++r) {
    MultiPairSet next = cur;
    for (const auto& p : cur) {
      for (std::size_t i = 1; i <= cur.dim(); ++i) next.insert(MultiPair{p.component, p.alpha.raised(static_cast<int>(i))});
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace lbjet
