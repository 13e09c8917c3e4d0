#pragma once

#include <array>
#include <utility>
#include <vector>

#include "chiral/pauli.hpp"

namespace chiral {

/// Adjoint action on one site: L(P_in) = sum_out table[in][out] P_out with
/// basis order {I, x, y, z}.
using LocalTable = std::array<std::array<double, 4>, 4>;

/// Adjoint action of the ordered-pair terms (upstream l < downstream j) on
/// P_a(l) P_b(j): entry [(a*4+b)*16 + c*4 + d] is the coefficient of P_c(l) P_d(j).
using PairTable = std::array<double, 256>;

struct GeneratorPieces {
  LocalTable drive{};            // i[alpha_1 sum sx, .]
  LocalTable local_decay{};      // (1-beta) D[s-]
  LocalTable collective_self{};  // diagonal part of beta D[sum s-]
  PairTable chiral_pair{};       // cascade commutator plus collective cross terms

  LocalTable local() const;
};

GeneratorPieces make_generator_pieces(double alpha_1, double beta);

/// Term of an expanded Heisenberg derivative; an empty key is the identity.
struct GeneratorTerm {
  CumulantKey key;
  double coefficient;
};

/// Heisenberg-picture generator of the cascaded chain restricted to Pauli
/// strings. Strings on the first n atoms only produce strings on those atoms.
class AdjointGenerator {
 public:
  AdjointGenerator(double alpha_1, double beta);

  const GeneratorPieces& pieces() const { return pieces_; }

  /// Calls emit(key, coefficient) for every term of L(key). Terms may repeat.
  template <class Emit>
  void apply(const CumulantKey& key, Emit&& emit) const;

  std::vector<GeneratorTerm> apply(const CumulantKey& key) const;

 private:
  struct PairEntry {
    std::uint8_t out_l, out_j;
    double coefficient;
  };

  static CumulantKey replace_pair(const CumulantKey& key, int atom_l, int out_l, int pos_j, int out_j);

  GeneratorPieces pieces_;
  LocalTable local_;
  std::array<std::vector<PairEntry>, 16> pair_entries_;
};

template <class Emit>
void AdjointGenerator::apply(const CumulantKey& key, Emit&& emit) const {
  const int k = key.order();
  for (int p = 0; p < k; ++p) {
    const int in = static_cast<int>(to_pauli(key.axis(p)));
    for (int out = 0; out < 4; ++out) {
      const double c = local_[in][out];
      if (c == 0.0) continue;
      emit(out == 0 ? key.erase(p) : key.with_site({key.atom(p), to_axis(static_cast<Pauli>(out))}), c);
    }
  }
  for (int pj = 0; pj < k; ++pj) {
    const int j = key.atom(pj);
    const int in_j = static_cast<int>(to_pauli(key.axis(pj)));
    int pl = 0;
    for (int l = 1; l < j; ++l) {
      while (pl < pj && key.atom(pl) < l) ++pl;
      const bool inside = pl < pj && key.atom(pl) == l;
      const int in_l = inside ? static_cast<int>(to_pauli(key.axis(pl))) : 0;
      for (const PairEntry& e : pair_entries_[in_l * 4 + in_j])
        emit(replace_pair(key, l, e.out_l, pj, e.out_j), e.coefficient);
    }
  }
}

}  // namespace chiral
