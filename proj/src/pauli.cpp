#include "chiral/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace chiral {

PauliProduct pauli_multiply(Axis a, Axis b) {
  using namespace std::complex_literals;
  if (a == b) return {1.0, Pauli::identity};
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const int ic = 3 - ia - ib;
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? 1.0i : -1.0i, to_pauli(static_cast<Axis>(ic))};
}

PauliProduct pauli_multiply(Pauli a, Pauli b) {
  if (a == Pauli::identity) return {1.0, b};
  if (b == Pauli::identity) return {1.0, a};
  return pauli_multiply(to_axis(a), to_axis(b));
}

char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

Axis parse_axis(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'x': return Axis::x;
    case 'y': return Axis::y;
    case 'z': return Axis::z;
    default: throw std::invalid_argument(std::string("unknown axis '") + c + "'");
  }
}

CumulantKey::CumulantKey(std::initializer_list<Site> sites) {
  if (static_cast<int>(sites.size()) > kCapacity) throw std::invalid_argument("key too long");
  int prev = 0;
  for (const Site& s : sites) {
    if (s.atom <= prev) throw std::invalid_argument("key atoms must be strictly increasing and >= 1");
    prev = s.atom;
    push_back(s);
  }
}

CumulantKey CumulantKey::from_sites(std::vector<Site> sites) {
  if (static_cast<int>(sites.size()) > kCapacity) throw std::invalid_argument("key too long");
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) { return a.atom < b.atom; });
  CumulantKey k;
  int prev = 0;
  for (const Site& s : sites) {
    if (s.atom <= prev) throw std::invalid_argument("repeated or non-positive atom index in key");
    prev = s.atom;
    k.push_back(s);
  }
  return k;
}

CumulantKey CumulantKey::parse(std::string_view text) {
  std::vector<Site> sites;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == ',') {
      ++i;
      continue;
    }
    const Axis a = parse_axis(c);
    ++i;
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw std::invalid_argument("missing atom index in key '" + std::string(text) + "'");
    sites.push_back({std::stoi(std::string(text.substr(i, j - i))), a});
    i = j;
  }
  return from_sites(std::move(sites));
}

int CumulantKey::find_atom(int a) const {
  for (int i = 0; i < size_; ++i)
    if (atoms_[i] == a) return i;
  return -1;
}

CumulantKey CumulantKey::subset(unsigned mask) const {
  CumulantKey k;
  for (int i = 0; i < size_; ++i)
    if (mask & (1u << i)) k.push_back(site(i));
  return k;
}

CumulantKey CumulantKey::erase(int i) const {
  CumulantKey k;
  for (int p = 0; p < size_; ++p)
    if (p != i) k.push_back(site(p));
  return k;
}

CumulantKey CumulantKey::with_site(Site s) const {
  CumulantKey k;
  bool placed = false;
  for (int p = 0; p < size_; ++p) {
    if (!placed && s.atom <= atoms_[p]) {
      k.push_back(s);
      placed = true;
      if (s.atom == atoms_[p]) continue;
    }
    k.push_back(site(p));
  }
  if (!placed) {
    if (k.size_ == kCapacity) throw std::invalid_argument("key too long");
    k.push_back(s);
  }
  return k;
}

int CumulantKey::count_axis(Axis a) const {
  int n = 0;
  for (int i = 0; i < size_; ++i) n += axes_[i] == static_cast<std::uint8_t>(a);
  return n;
}

std::string CumulantKey::to_string() const {
  std::string out;
  for (int i = 0; i < size_; ++i) {
    if (i) out += ' ';
    out += axis_name(axis(i));
    out += std::to_string(atoms_[i]);
  }
  return out;
}

bool operator<(const CumulantKey& a, const CumulantKey& b) {
  if (a.size_ != b.size_) return a.size_ < b.size_;
  for (int i = a.size_ - 1; i >= 0; --i)
    if (a.atoms_[i] != b.atoms_[i]) return a.atoms_[i] < b.atoms_[i];
  for (int i = a.size_ - 1; i >= 0; --i)
    if (a.axes_[i] != b.axes_[i]) return a.axes_[i] < b.axes_[i];
  return false;
}

std::size_t CumulantKey::hash() const {
  std::size_t h = size_;
  for (int i = 0; i < size_; ++i) {
    h = h * 1000003u ^ static_cast<std::size_t>(atoms_[i]);
    h = h * 31u + axes_[i];
  }
  return h;
}

}  // namespace chiral
