#include "chiral/key_index.hpp"

namespace chiral {

KeyLayout::KeyLayout(int n_atoms, int max_order) : n_atoms_(n_atoms), max_order_(max_order) {
  if (n_atoms < 0) throw std::invalid_argument("negative atom count");
  if (max_order < 0 || max_order > CumulantKey::kCapacity) throw std::invalid_argument("unsupported key order");
  const int cols = n_atoms + 1;
  binom_.assign(static_cast<std::size_t>(max_order + 1) * cols, 0);
  for (int n = 0; n <= n_atoms; ++n) binom_[n] = 1;
  for (int k = 1; k <= max_order; ++k)
    for (int n = k; n <= n_atoms; ++n)
      binom_[static_cast<std::size_t>(k) * cols + n] =
          binom_[static_cast<std::size_t>(k) * cols + n - 1] + binom_[static_cast<std::size_t>(k - 1) * cols + n - 1];
}

std::size_t KeyLayout::index(const CumulantKey& key) const {
  const int k = key.order();
  std::size_t rank = 0, code = 0;
  for (int i = 0; i < k; ++i) {
    rank += choose(key.atom(i) - 1, i + 1);
    code += static_cast<std::size_t>(key.axis(i)) * kPow3[i];
  }
  return rank * kPow3[k] + code;
}

CumulantKey KeyLayout::key_at(int order, std::size_t index) const {
  std::size_t rank = index / kPow3[order];
  std::size_t code = index % kPow3[order];
  std::vector<Site> sites(order);
  int c = n_atoms_ - 1;
  for (int i = order; i >= 1; --i) {
    while (choose(c, i) > rank) --c;
    rank -= choose(c, i);
    sites[i - 1].atom = c + 1;
    --c;
  }
  for (int i = 0; i < order; ++i) {
    sites[i].axis = static_cast<Axis>(code % 3);
    code /= 3;
  }
  return CumulantKey::from_sites(std::move(sites));
}

}  // namespace chiral
