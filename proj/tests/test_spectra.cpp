#include "doctest.h"

#include <cmath>
#include <numbers>

#include "chiral/oracle.hpp"
#include "chiral/spectra.hpp"

using namespace chiral;

namespace {

SystemParams params(int n, double beta, double ratio, int order) {
  SystemParams p;
  p.n_atoms = n;
  p.beta = beta;
  p.drive_ratio = ratio;
  p.truncation_order = order;
  return p;
}

const double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("untruncated spectra equal the exact ones") {
  const std::vector<double> omega = linear_grid(-6.0, 6.0, 25);
  for (const auto& [n, beta, ratio] : {std::tuple{1, 0.3, 0.125}, std::tuple{2, 0.05, 1.0}, std::tuple{3, 0.3, 0.01},
                                       std::tuple{4, 0.2, 0.125}}) {
    const SystemParams p = params(n, beta, ratio, n);
    const SteadyStateSolution sol = solve_chain(p);
    const Liouvillian l = build_liouvillian(p);
    const DensityMatrix rho = steady_state(l);
    const SpectralKernel kernel = spectral_kernel(sol, omega);
    for (double theta : {0.0, 0.5 * kPi, 0.3}) {
      const auto exact = exact_squeezing_spectrum(rho, l, theta, omega);
      const SpectrumResult got = squeezing_spectrum(kernel, theta);
      CHECK(got.tag == "theta");
      for (std::size_t i = 0; i < omega.size(); ++i) CHECK(std::abs(got.values[i] - exact[i]) < 1e-10);
    }
    const Eigen::MatrixXcd s = collective_lowering(n);
    const auto f = exact_spectrum(rho, l, s.adjoint(), s, omega);
    const SpectrumResult inel = inelastic_spectrum(kernel);
    for (std::size_t i = 0; i < omega.size(); ++i) CHECK(std::abs(inel.values[i] - beta * f[i].real()) < 1e-10);
  }
}

TEST_CASE("spectra are pi periodic in theta, even in omega and decay") {
  const SteadyStateSolution sol = solve_chain(params(6, 0.1, 0.3, 2));
  const std::vector<double> omega{-50.0, -1.3, 0.0, 1.3, 50.0};
  const SpectralKernel k = spectral_kernel(sol, omega);
  for (double theta : {0.0, 0.7, 2.0}) {
    for (std::size_t i = 0; i < omega.size(); ++i)
      CHECK(k.quadrature(theta, i) == doctest::Approx(k.quadrature(theta + kPi, i)).epsilon(1e-12));
    CHECK(k.quadrature(theta, 1) == doctest::Approx(k.quadrature(theta, 3)).epsilon(1e-12));
    CHECK(std::abs(k.quadrature(theta, 4)) < 1e-2 * std::abs(k.quadrature(theta, 2)) + 1e-12);
  }
}

TEST_CASE("spectral weight equals the equal-time fluctuations") {
  const SteadyStateSolution sol = solve_chain(params(8, 0.1, 0.125, 2));
  const std::vector<double> omega = linear_grid(-40.0, 40.0, 2001);
  const SpectralKernel k = spectral_kernel(sol, omega);
  for (double theta : {0.0, 0.5 * kPi}) {
    const double area = spectral_integral(omega, squeezing_spectrum(k, theta).values);
    const double direct = integrated_fluctuations(sol, theta);
    CHECK(area == doctest::Approx(direct).epsilon(1e-3));
  }
  const auto c0 = quadrature_correlation(sol, 0.4, {0.0});
  CHECK(c0[0] == doctest::Approx(integrated_fluctuations(sol, 0.4)).epsilon(1e-10));
}

TEST_CASE("spectral integral of a lorentzian") {
  const std::vector<double> omega = linear_grid(-30.0, 30.0, 3001);
  std::vector<double> v;
  for (double w : omega) v.push_back(2.0 / (1.0 + w * w));
  CHECK(spectral_integral(omega, v) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS(spectral_integral({0.0}, {1.0}));
}

TEST_CASE("single-atom Mollow spectrum stays physical") {
  const SteadyStateSolution sol = solve_chain(params(1, 0.5, drive_ratio_from_s(2.0), 2));
  const SpectralKernel k = spectral_kernel(sol, default_omega_grid(sol.params, 201));
  const PhysicalityReport rep = check_physicality(k);
  CHECK(rep.pass());
  CHECK(inelastic_spectrum(k).min_value >= -1e-12);
  CHECK(default_omega_grid(params(1, 0.1, 10.0, 1)).back() == doctest::Approx(84.0));
  CHECK(default_omega_grid(sol.params).size() == 801);
}

TEST_CASE("first-order spectra sum independent driven atoms") {
  const SteadyStateSolution sol = solve_chain(params(5, 0.2, 0.3, 1));
  const std::vector<double> omega{0.0, 0.8};
  const SpectralKernel k = spectral_kernel(sol, omega);
  double expect[2] = {0.0, 0.0};
  for (int j = 1; j <= 5; ++j) {
    SystemParams one = params(1, 0.2, sol.alpha(j) * sol.alpha(j), 1);
    const Liouvillian l = build_liouvillian(one);
    const auto e = exact_squeezing_spectrum(steady_state(l), l, 0.0, omega);
    expect[0] += e[0];
    expect[1] += e[1];
  }
  CHECK(k.quadrature(0.0, 0) == doctest::Approx(expect[0]).epsilon(1e-10));
  CHECK(k.quadrature(0.0, 1) == doctest::Approx(expect[1]).epsilon(1e-10));
}

TEST_CASE("regression drift") {
  const SteadyStateSolution sol = solve_chain(params(5, 0.2, 0.4, 3), {VariableSet::full});
  const RegressionSystem sys = build_regression_system(sol, {0, Axis::x});
  CHECK(sys.stage_begin.size() == 6);
  CHECK(sys.initial.size() == sys.size());

  SUBCASE("diagonal blocks are the steady-state stage matrices") {
    for (int stage = 2; stage <= 5; ++stage) {
      const StageSystem st = generate_stage_system(sol.params, stage, truncate_solution(sol, stage - 1).moments,
                                                   VariableSet::full, StageForm::cumulant);
      const int b = sys.stage_begin[stage - 1], e = sys.stage_begin[stage];
      REQUIRE(static_cast<int>(st.variables.size()) == e - b);
      const Eigen::MatrixXd block = Eigen::MatrixXd(sys.drift).block(b, b, e - b, e - b);
      CHECK((block - Eigen::MatrixXd(st.matrix)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("stable decay") {
    const StabilityReport rep = regression_stability(sys);
    CHECK(rep.checked);
    CHECK(rep.stable);
    CHECK(rep.max_real_part < 0.0);
  }
  SUBCASE("correlation starts at the initial value and matches the oracle") {
    SystemParams p = sol.params;
    p.n_atoms = 3;
    p.truncation_order = 3;
    const SteadyStateSolution small = solve_chain(p, {VariableSet::full});
    const RegressionSystem r = build_regression_system(small, {2, Axis::y});
    const CumulantKey key = CumulantKey::parse("x3");
    const std::vector<double> tau{0.0, 0.5, 2.0};
    const auto c = regression_correlation(r, key, tau);
    const Liouvillian l = build_liouvillian(p);
    const DensityMatrix rho = steady_state(l);
    const auto exact = exact_correlation(rho, l, pauli_string_operator(3, key),
                                         pauli_string_operator(3, CumulantKey::parse("y2")), tau);
    for (std::size_t i = 0; i < tau.size(); ++i) CHECK(std::abs(c[i] - exact[i]) < 1e-8);
  }
  CHECK_THROWS(build_regression_system(solve_chain(params(3, 0.1, 0.1, 1)), {0, Axis::x}));
}
