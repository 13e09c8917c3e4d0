#include "chiral/generator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace chiral {

namespace {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using cd = std::complex<double>;

std::array<Mat2, 4> pauli_basis() {
  std::array<Mat2, 4> p;
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, cd(0, -1), cd(0, 1), 0;
  p[3] << 1, 0, 0, -1;
  return p;
}

Mat2 lowering() {
  Mat2 m;
  m << 0, 0, 1, 0;
  return m;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

template <class M>
M dissipator_adjoint(const M& c, const M& o) {
  const M cd = c.adjoint();
  return cd * o * c - 0.5 * (cd * c * o + o * cd * c);
}

template <class M>
M cross_dissipator_adjoint(const M& a, const M& b, const M& o) {
  // c_a^dag O c_b + c_b^dag O c_a - 1/2 {c_a^dag c_b + c_b^dag c_a, O}
  const M g = a.adjoint() * b + b.adjoint() * a;
  return a.adjoint() * o * b + b.adjoint() * o * a - 0.5 * (g * o + o * g);
}

double real_checked(cd v) {
  if (std::abs(v.imag()) > 1e-14) throw std::logic_error("complex coefficient in Pauli-basis generator");
  return v.real();
}

LocalTable local_table(const std::function<Mat2(const Mat2&)>& action) {
  const auto p = pauli_basis();
  LocalTable t{};
  for (int in = 0; in < 4; ++in) {
    const Mat2 r = action(p[in]);
    for (int out = 0; out < 4; ++out) t[in][out] = real_checked((p[out] * r).trace() / 2.0);
  }
  return t;
}

}  // namespace

LocalTable GeneratorPieces::local() const {
  LocalTable t{};
  for (int i = 0; i < 4; ++i)
    for (int o = 0; o < 4; ++o) t[i][o] = drive[i][o] + local_decay[i][o] + collective_self[i][o];
  return t;
}

GeneratorPieces make_generator_pieces(double alpha_1, double beta) {
  const auto p = pauli_basis();
  const Mat2 sm = lowering();
  const cd i(0, 1);
  GeneratorPieces g;
  const Mat2 h = alpha_1 * p[1];
  g.drive = local_table([&](const Mat2& o) -> Mat2 { return i * (h * o - o * h); });
  g.local_decay = local_table([&](const Mat2& o) -> Mat2 { return (1.0 - beta) * dissipator_adjoint(sm, o); });
  g.collective_self = local_table([&](const Mat2& o) -> Mat2 { return beta * dissipator_adjoint(sm, o); });

  const Mat2 id = Mat2::Identity();
  const Mat4 sl = kron(sm, id), sj = kron(id, sm);
  const Mat4 hc = (i * beta / 2.0) * (sl.adjoint() * sj - sj.adjoint() * sl);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Mat4 o = kron(p[a], p[b]);
      const Mat4 r = i * (hc * o - o * hc) + beta * cross_dissipator_adjoint(sl, sj, o);
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          g.chiral_pair[(a * 4 + b) * 16 + c * 4 + d] = real_checked((kron(p[c], p[d]) * r).trace() / 4.0);
    }
  return g;
}

AdjointGenerator::AdjointGenerator(double alpha_1, double beta)
    : pieces_(make_generator_pieces(alpha_1, beta)), local_(pieces_.local()) {
  for (int in = 0; in < 16; ++in)
    for (int out = 0; out < 16; ++out) {
      const double c = pieces_.chiral_pair[in * 16 + out];
      if (std::abs(c) > 1e-15)
        pair_entries_[in].push_back({static_cast<std::uint8_t>(out / 4), static_cast<std::uint8_t>(out % 4), c});
    }
}

std::vector<GeneratorTerm> AdjointGenerator::apply(const CumulantKey& key) const {
  std::vector<GeneratorTerm> out;
  apply(key, [&](const CumulantKey& k, double c) { out.push_back({k, c}); });
  return out;
}

CumulantKey AdjointGenerator::replace_pair(const CumulantKey& key, int atom_l, int out_l, int pos_j, int out_j) {
  CumulantKey k = out_j == 0 ? key.erase(pos_j)
                             : key.with_site({key.atom(pos_j), to_axis(static_cast<Pauli>(out_j))});
  if (out_l == 0) {
    const int p = k.find_atom(atom_l);
    return p < 0 ? k : k.erase(p);
  }
  return k.with_site({atom_l, to_axis(static_cast<Pauli>(out_l))});
}

}  // namespace chiral
