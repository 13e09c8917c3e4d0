#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "chiral/pauli.hpp"

namespace chiral {

/// Dense numbering of canonical keys with order <= max_order on atoms 1..N.
/// Within an order block the atom set is ranked colexicographically and the
/// axes are packed base 3, so the keys on atoms 1..n form a prefix of every
/// block and the keys whose highest atom is n form a contiguous slice.
class KeyLayout {
 public:
  KeyLayout(int n_atoms, int max_order);

  int n_atoms() const { return n_atoms_; }
  int max_order() const { return max_order_; }

  std::uint64_t choose(int n, int k) const {
    return (n < 0 || k < 0 || k > n) ? 0 : binom_[static_cast<std::size_t>(k) * (n_atoms_ + 1) + n];
  }
  static std::size_t axis_states(int order) { return kPow3[order]; }

  /// Number of keys of the given order on the first n atoms.
  std::size_t block_size(int order, int n) const { return choose(n, order) * kPow3[order]; }
  std::size_t block_size(int order) const { return block_size(order, n_atoms_); }

  std::size_t index(const CumulantKey& key) const;
  /// Index of key.subset(mask) without building it; order receives its size.
  std::size_t subset_index(const CumulantKey& key, unsigned mask, int& order) const {
    std::size_t rank = 0, code = 0;
    int pos = 0;
    for (int i = 0; i < key.order(); ++i) {
      if (!(mask & (1u << i))) continue;
      rank += choose(key.atom(i) - 1, pos + 1);
      code += static_cast<std::size_t>(key.axis(i)) * kPow3[pos];
      ++pos;
    }
    order = pos;
    return rank * kPow3[pos] + code;
  }
  CumulantKey key_at(int order, std::size_t index) const;

  bool contains(const CumulantKey& key) const {
    return !key.empty() && key.order() <= max_order_ && key.max_atom() <= n_atoms_;
  }

  static constexpr std::size_t kPow3[7] = {1, 3, 9, 27, 81, 243, 729};

 private:
  int n_atoms_;
  int max_order_;
  std::vector<std::uint64_t> binom_;
};

/// Keys that survive the resonant-drive symmetry (even number of x factors).
inline bool is_reduced_key(const CumulantKey& key) { return key.count_axis(Axis::x) % 2 == 0; }

/// Real values for every key of a KeyLayout. Missing entries read as zero.
template <class Tag>
class CorrelationTable {
 public:
  CorrelationTable() = default;
  CorrelationTable(int n_atoms, int max_order)
      : layout_(std::make_shared<KeyLayout>(n_atoms, max_order)), blocks_(max_order + 1) {
    for (int k = 1; k <= max_order; ++k) blocks_[k].assign(layout_->block_size(k), 0.0);
  }

  int n_atoms() const { return layout_ ? layout_->n_atoms() : 0; }
  int max_order() const { return layout_ ? layout_->max_order() : 0; }
  const KeyLayout& layout() const { return *layout_; }

  double value(const CumulantKey& key) const {
    check(key);
    return blocks_[key.order()][layout_->index(key)];
  }
  double& at(const CumulantKey& key) {
    check(key);
    return blocks_[key.order()][layout_->index(key)];
  }
  void set(const CumulantKey& key, double v) { at(key) = v; }

  std::vector<double>& block(int order) { return blocks_[order]; }
  const std::vector<double>& block(int order) const { return blocks_[order]; }

  /// Restriction to atoms 1..n (a prefix of every block).
  CorrelationTable truncated(int n) const {
    if (n < 1 || n > n_atoms()) throw std::out_of_range("truncation atom count out of range");
    CorrelationTable t(n, max_order());
    for (int k = 1; k <= max_order(); ++k)
      std::copy_n(blocks_[k].begin(), t.blocks_[k].size(), t.blocks_[k].begin());
    return t;
  }

  template <class F>
  void for_each(F&& f) const {
    for (int k = 1; k <= max_order(); ++k)
      for (std::size_t i = 0; i < blocks_[k].size(); ++i) f(layout_->key_at(k, i), blocks_[k][i]);
  }

  friend bool operator==(const CorrelationTable& a, const CorrelationTable& b) {
    return a.n_atoms() == b.n_atoms() && a.max_order() == b.max_order() && a.blocks_ == b.blocks_;
  }

 private:
  void check(const CumulantKey& key) const {
    if (!layout_ || !layout_->contains(key))
      throw std::out_of_range("key " + key.to_string() + " outside table");
  }

  std::shared_ptr<const KeyLayout> layout_;
  std::vector<std::vector<double>> blocks_;
};

struct MomentTag {};
struct CumulantTag {};
using MomentTable = CorrelationTable<MomentTag>;
using CumulantTable = CorrelationTable<CumulantTag>;

}  // namespace chiral
