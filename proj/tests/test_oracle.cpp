#include "doctest.h"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "chiral/oracle.hpp"
#include "test_support.hpp"

using namespace chiral;
using testing_support::cd;

namespace {

Eigen::Matrix2cd lower() {
  Eigen::Matrix2cd m;
  m << 0, 0, 1, 0;
  return m;
}

void dissipate(Eigen::MatrixXcd& out, const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& rho, double rate) {
  const Eigen::MatrixXcd cdc = c.adjoint() * c;
  out += rate * (c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc));
}

// Cascaded master equation written as per-atom decay plus one-way coupling terms.
Eigen::MatrixXcd cascade_rhs(const SystemParams& p, const Eigen::MatrixXcd& rho) {
  const int n = p.n_atoms;
  const double a = std::sqrt(p.drive_ratio);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  std::vector<Eigen::MatrixXcd> s(n + 1);
  for (int j = 1; j <= n; ++j) {
    s[j] = site_operator(n, j, lower());
    h += a * (s[j] + s[j].adjoint());
  }
  Eigen::MatrixXcd out = cd(0, -1) * (h * rho - rho * h);
  for (int j = 1; j <= n; ++j) dissipate(out, s[j], rho, 1.0);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k < j; ++k) {
      const Eigen::MatrixXcd c1 = s[k] * rho * s[j].adjoint() - s[j].adjoint() * s[k] * rho;
      const Eigen::MatrixXcd c2 = s[j] * rho * s[k].adjoint() - rho * s[k].adjoint() * s[j];
      out += p.beta * (c1 + c2);
    }
  return out;
}

}  // namespace

TEST_CASE("liouvillian matches the cascaded master equation") {
  SystemParams p;
  p.n_atoms = 3;
  p.beta = 0.35;
  p.drive_ratio = 0.7;
  const Liouvillian l = build_liouvillian(p);
  const Eigen::MatrixXcd rho = testing_support::random_state(3, 9);
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  Eigen::VectorXcd lv = l.matrix * v;
  const Eigen::MatrixXcd got = Eigen::Map<Eigen::MatrixXcd>(lv.data(), 8, 8);
  CHECK((got - cascade_rhs(p, rho)).norm() < 1e-12);
}

TEST_CASE("steady state is a normalized hermitian state") {
  SystemParams p;
  p.n_atoms = 4;
  p.beta = 0.2;
  p.drive_ratio = 1.3;
  const DensityMatrix rho = steady_state(build_liouvillian(p));
  CHECK(std::abs(rho.rho.trace() - cd(1.0)) < 1e-12);
  CHECK((rho.rho - rho.rho.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("single atom closed form") {
  for (double ratio : {0.01, 0.2, 1.0, 5.0}) {
    SystemParams p;
    p.n_atoms = 1;
    p.beta = 0.4;
    p.drive_ratio = ratio;
    const DensityMatrix rho = steady_state(build_liouvillian(p));
    const double a2 = ratio;
    CHECK(exact_moment(rho, CumulantKey::parse("z1")) == doctest::Approx(-1.0 / (1.0 + 8.0 * a2)).epsilon(1e-12));
    CHECK(exact_moment(rho, CumulantKey::parse("y1")) ==
          doctest::Approx(4.0 * std::sqrt(a2) / (1.0 + 8.0 * a2)).epsilon(1e-12));
    CHECK(std::abs(exact_moment(rho, CumulantKey::parse("x1"))) < 1e-13);
  }
}

TEST_CASE("upstream atoms do not feel the downstream ones") {
  SystemParams p;
  p.beta = 0.5;
  p.drive_ratio = 0.3;
  p.n_atoms = 4;
  const DensityMatrix full = steady_state(build_liouvillian(p));
  p.n_atoms = 2;
  const DensityMatrix head = steady_state(build_liouvillian(p));
  CHECK((partial_trace_tail(full, 2).rho - head.rho).norm() < 1e-11);
}

TEST_CASE("correlation at zero delay and its transform agree") {
  SystemParams p;
  p.n_atoms = 2;
  p.beta = 0.3;
  p.drive_ratio = 0.5;
  const Liouvillian l = build_liouvillian(p);
  const DensityMatrix rho = steady_state(l);
  const Eigen::MatrixXcd s = collective_lowering(2);
  const Eigen::MatrixXcd sd = s.adjoint();
  const cd m_sd = (rho.rho * sd).trace(), m_s = (rho.rho * s).trace();
  const auto c0 = exact_correlation(rho, l, sd, s, {0.0});
  CHECK(std::abs(c0[0] - ((rho.rho * sd * s).trace() - m_sd * m_s)) < 1e-10);

  // F(w) = 2 Re-part integral of the correlation; compare with quadrature in tau
  std::vector<double> tau;
  for (int i = 0; i <= 8000; ++i) tau.push_back(i * 0.005);
  const auto c = exact_correlation(rho, l, sd, s, tau);
  const double w = 0.7;
  cd integral = 0.0;
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    const double h = tau[i + 1] - tau[i];
    integral += 0.5 * h * (2.0 * std::cos(w * tau[i]) * c[i] + 2.0 * std::cos(w * tau[i + 1]) * c[i + 1]);
  }
  const auto f = exact_spectrum(rho, l, sd, s, {w});
  CHECK(std::abs(f[0] - integral) < 1e-5);
}

TEST_CASE("exact powers conserve flux for a lossless chain") {
  SystemParams p;
  p.n_atoms = 3;
  p.beta = 1.0;
  p.drive_ratio = 0.4;
  const DensityMatrix rho = steady_state(build_liouvillian(p));
  const ExactPowers pw = exact_powers(rho, p);
  CHECK(pw.p_out == doctest::Approx(pw.p_in).epsilon(1e-10));
  SystemParams one = p;
  one.n_atoms = 1;
  one.beta = 0.2;
  const DensityMatrix r1 = steady_state(build_liouvillian(one));
  CHECK(exact_g2(r1, one) > 0.0);
}
