#pragma once

#include <functional>
#include <vector>

#include "chiral/key_index.hpp"
#include "chiral/pauli.hpp"

namespace chiral {

inline constexpr int kMaxPartitionSize = 6;

/// Set partition of {1..k}; block i holds the positions whose bits are set in
/// block_masks[i] (bit p <-> element p+1).
struct Partition {
  std::vector<unsigned> block_masks;

  int block_count() const { return static_cast<int>(block_masks.size()); }
  std::vector<std::vector<int>> blocks() const;
};

/// Every set partition of {1..k}, each once, in a fixed order. Cached.
const std::vector<Partition>& enumerate_partitions(int k);

/// f(n) = (-1)^(n-1) (n-1)!
long long partition_weight(int block_count);

using KeyFunction = std::function<double(const CumulantKey&)>;

/// Joint cumulant of the operators in key from their moments.
double cumulant_from_moments(const CumulantKey& key, const KeyFunction& moment);
double cumulant_from_moments(const CumulantKey& key, const MomentTable& moments);

/// Moment of key assuming every cumulant above the table's max order vanishes.
double moment_from_cumulants(const CumulantKey& key, const CumulantTable& cumulants);

/// Moment of an order (l+1) key implied by a zero top cumulant, evaluated as
/// minus the weighted sum over nontrivial partitions of lower moments.
double closure_expand(const CumulantKey& key, const CumulantTable& cumulants);

MomentTable moments_from_cumulants(const CumulantTable& cumulants);
CumulantTable cumulants_from_moments(const MomentTable& moments);

}  // namespace chiral
