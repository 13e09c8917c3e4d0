#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace chiral::detail {

// Entries whose sum is below this fraction of the summed magnitudes are
// rounding residue of an exact cancellation.
inline constexpr double kCancellation = 64.0 * std::numeric_limits<double>::epsilon();

// Dense accumulator with magnitude tracking so exactly cancelling entries can
// be recognised and dropped.
struct RowAccumulator {
  explicit RowAccumulator(int dim) : value(dim, 0.0), magnitude(dim, 0.0), seen(dim, 0) {}

  void add(int col, double v) {
    if (!seen[col]) {
      seen[col] = 1;
      touched.push_back(col);
    }
    value[col] += v;
    magnitude[col] += std::abs(v);
  }

  std::vector<std::pair<int, double>> flush() {
    std::vector<std::pair<int, double>> row;
    row.reserve(touched.size());
    for (int c : touched) {
      if (std::abs(value[c]) > kCancellation * magnitude[c]) row.emplace_back(c, value[c]);
      value[c] = magnitude[c] = 0.0;
      seen[c] = 0;
    }
    touched.clear();
    return row;
  }

  std::vector<double> value, magnitude;
  std::vector<char> seen;
  std::vector<int> touched;
};

}  // namespace chiral::detail
