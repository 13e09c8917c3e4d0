#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace chiral {

enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };
inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

/// Single-site operator basis {I, sx, sy, sz}.
enum class Pauli : std::uint8_t { identity = 0, x = 1, y = 2, z = 3 };

inline constexpr Pauli to_pauli(Axis a) { return static_cast<Pauli>(static_cast<int>(a) + 1); }
inline constexpr Axis to_axis(Pauli p) { return static_cast<Axis>(static_cast<int>(p) - 1); }

struct PauliProduct {
  std::complex<double> coefficient;
  Pauli result;
};

PauliProduct pauli_multiply(Axis a, Axis b);
PauliProduct pauli_multiply(Pauli a, Pauli b);

char axis_name(Axis a);
Axis parse_axis(char c);

struct Site {
  int atom;  // 1-based
  Axis axis;
  friend bool operator==(const Site&, const Site&) = default;
};

/// Product of Pauli operators on distinct atoms, stored with strictly
/// increasing atom indices. An empty key stands for the identity and is only
/// used internally (e.g. as the remainder of a partition).
class CumulantKey {
 public:
  static constexpr int kCapacity = 6;

  CumulantKey() = default;
  /// Sites must already be canonical; throws std::invalid_argument otherwise.
  CumulantKey(std::initializer_list<Site> sites);
  /// Sorts by atom; throws on repeated atoms.
  static CumulantKey from_sites(std::vector<Site> sites);
  /// Parses "x1 z3" or "x1,z3".
  static CumulantKey parse(std::string_view text);

  int order() const { return size_; }
  bool empty() const { return size_ == 0; }
  int atom(int i) const { return atoms_[i]; }
  Axis axis(int i) const { return static_cast<Axis>(axes_[i]); }
  Site site(int i) const { return {atoms_[i], axis(i)}; }
  int max_atom() const { return size_ ? atoms_[size_ - 1] : 0; }
  int find_atom(int a) const;

  /// Sites selected by the bits of mask, in order.
  CumulantKey subset(unsigned mask) const;
  /// Removes the site at position i.
  CumulantKey erase(int i) const;
  /// Adds or replaces the operator on s.atom.
  CumulantKey with_site(Site s) const;

  int count_axis(Axis a) const;
  std::string to_string() const;

  friend bool operator==(const CumulantKey& a, const CumulantKey& b) {
    if (a.size_ != b.size_) return false;
    for (int i = 0; i < a.size_; ++i)
      if (a.atoms_[i] != b.atoms_[i] || a.axes_[i] != b.axes_[i]) return false;
    return true;
  }
  /// Order first, then colex on atoms, then axes.
  friend bool operator<(const CumulantKey& a, const CumulantKey& b);

  std::size_t hash() const;

 private:
  void push_back(Site s) {
    atoms_[size_] = s.atom;
    axes_[size_] = static_cast<std::uint8_t>(s.axis);
    ++size_;
  }

  std::array<std::int32_t, kCapacity> atoms_{};
  std::array<std::uint8_t, kCapacity> axes_{};
  std::uint8_t size_ = 0;
};

struct CumulantKeyHash {
  std::size_t operator()(const CumulantKey& k) const { return k.hash(); }
};

}  // namespace chiral
