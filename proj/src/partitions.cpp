#include "chiral/partitions.hpp"

#include <array>
#include <stdexcept>

namespace chiral {

namespace {

void extend(int k, int next, std::vector<unsigned>& blocks, std::vector<Partition>& out) {
  if (next == k) {
    out.push_back({blocks});
    return;
  }
  const unsigned bit = 1u << next;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    blocks[b] |= bit;
    extend(k, next + 1, blocks, out);
    blocks[b] &= ~bit;
  }
  blocks.push_back(bit);
  extend(k, next + 1, blocks, out);
  blocks.pop_back();
}

std::array<std::vector<Partition>, kMaxPartitionSize + 1> build_all() {
  std::array<std::vector<Partition>, kMaxPartitionSize + 1> all;
  for (int k = 1; k <= kMaxPartitionSize; ++k) {
    std::vector<unsigned> blocks;
    extend(k, 0, blocks, all[k]);
  }
  return all;
}

}  // namespace

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out;
  for (unsigned m : block_masks) {
    std::vector<int> b;
    for (int p = 0; m >> p; ++p)
      if (m & (1u << p)) b.push_back(p + 1);
    out.push_back(std::move(b));
  }
  return out;
}

const std::vector<Partition>& enumerate_partitions(int k) {
  static const auto all = build_all();
  if (k < 1 || k > kMaxPartitionSize) throw std::out_of_range("partition size out of supported range");
  return all[k];
}

long long partition_weight(int block_count) {
  if (block_count < 1) throw std::invalid_argument("block count must be >= 1");
  long long f = 1;
  for (int i = 2; i < block_count; ++i) f *= i;
  return block_count % 2 ? f : -f;
}

double cumulant_from_moments(const CumulantKey& key, const KeyFunction& moment) {
  double sum = 0.0;
  for (const Partition& p : enumerate_partitions(key.order())) {
    double prod = static_cast<double>(partition_weight(p.block_count()));
    for (unsigned m : p.block_masks) prod *= moment(key.subset(m));
    sum += prod;
  }
  return sum;
}

double cumulant_from_moments(const CumulantKey& key, const MomentTable& moments) {
  return cumulant_from_moments(key, [&](const CumulantKey& k) { return moments.value(k); });
}

double moment_from_cumulants(const CumulantKey& key, const CumulantTable& cumulants) {
  const int top = cumulants.max_order();
  double sum = 0.0;
  for (const Partition& p : enumerate_partitions(key.order())) {
    double prod = 1.0;
    for (unsigned m : p.block_masks) {
      const CumulantKey b = key.subset(m);
      if (b.order() > top) {
        prod = 0.0;
        break;
      }
      prod *= cumulants.value(b);
    }
    sum += prod;
  }
  return sum;
}

double closure_expand(const CumulantKey& key, const CumulantTable& cumulants) {
  if (key.order() != cumulants.max_order() + 1)
    throw std::invalid_argument("closure key order must exceed the table order by one");
  double sum = 0.0;
  for (const Partition& p : enumerate_partitions(key.order())) {
    if (p.block_count() == 1) continue;
    double prod = static_cast<double>(partition_weight(p.block_count()));
    for (unsigned m : p.block_masks) prod *= moment_from_cumulants(key.subset(m), cumulants);
    sum += prod;
  }
  return -sum;
}

// Both conversions use m(K) = sum over B containing the first site of
// k(B) m(K\B), which needs 2^(k-1) terms instead of a Bell number.
MomentTable moments_from_cumulants(const CumulantTable& cumulants) {
  MomentTable moments(cumulants.n_atoms(), cumulants.max_order());
  const KeyLayout& layout = cumulants.layout();
  for (int k = 1; k <= cumulants.max_order(); ++k) {
    const auto& kb = cumulants.block(k);
    auto& mb = moments.block(k);
    const unsigned full = (1u << k) - 1;
    for (std::size_t i = 0; i < mb.size(); ++i) {
      const CumulantKey key = layout.key_at(k, i);
      double sum = kb[i];
      for (unsigned rest = 1; rest < full; ++rest) {
        if (rest & 1u) continue;
        const CumulantKey b = key.subset(full & ~rest);
        const CumulantKey r = key.subset(rest);
        sum += cumulants.block(b.order())[layout.index(b)] * moments.block(r.order())[layout.index(r)];
      }
      mb[i] = sum;
    }
  }
  return moments;
}

CumulantTable cumulants_from_moments(const MomentTable& moments) {
  CumulantTable cumulants(moments.n_atoms(), moments.max_order());
  const KeyLayout& layout = moments.layout();
  for (int k = 1; k <= moments.max_order(); ++k) {
    const auto& mb = moments.block(k);
    auto& kb = cumulants.block(k);
    const unsigned full = (1u << k) - 1;
    for (std::size_t i = 0; i < kb.size(); ++i) {
      const CumulantKey key = layout.key_at(k, i);
      double sum = mb[i];
      for (unsigned rest = 1; rest < full; ++rest) {
        if (rest & 1u) continue;
        const CumulantKey b = key.subset(full & ~rest);
        const CumulantKey r = key.subset(rest);
        sum -= cumulants.block(b.order())[layout.index(b)] * moments.block(r.order())[layout.index(r)];
      }
      kb[i] = sum;
    }
  }
  return cumulants;
}

}  // namespace chiral
