#include "doctest.h"

#include <cmath>

#include "chiral/observables.hpp"
#include "chiral/oracle.hpp"

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

}  // namespace

TEST_CASE("lambert w") {
  CHECK(lambert_w(0.0) == 0.0);
  CHECK(lambert_w(1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-15));
  CHECK(lambert_w(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  for (double x : {1e-12, 0.3, 7.0, 1e6, 1e300}) {
    const double w = lambert_w(x);
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-13));
  }
  CHECK_THROWS_AS(lambert_w(-0.1), std::domain_error);
  CHECK(lambert_w_exp(1000.0) + std::log(lambert_w_exp(1000.0)) == doctest::Approx(1000.0).epsilon(1e-14));
  CHECK(lambert_w_exp(2.0) == doctest::Approx(lambert_w(std::exp(2.0))));
}

TEST_CASE("lambert power limits") {
  // weak drive: Beer-Lambert
  const SystemParams weak = params(1, 0.05, 1e-8, 1);
  for (double z : {0.0, 10.0, 30.0})
    CHECK(lambert_power(z, weak) == doctest::Approx(input_power(weak) * std::exp(-4 * 0.05 * z)).epsilon(1e-6));
  // s = 1 at z = 0 and P_in/e after W(e^{1 - 4 beta z}) = e^{-1}... checked through the defining relation
  const SystemParams mid = params(1, 0.1, drive_ratio_from_s(1.0), 1);
  const double z = 7.0;
  const double r = lambert_power(z, mid) / input_power(mid);
  CHECK(std::log(r) + r - 1.0 == doctest::Approx(-4 * 0.1 * z).epsilon(1e-12));
  // strong drive: each atom removes about half a photon per unit time
  const SystemParams strong = params(1, 0.1, 1e4, 1);
  CHECK(input_power(strong) - lambert_power(20.0, strong) == doctest::Approx(10.0).epsilon(1e-3));
  CHECK(lambert_power(0.0, params(1, 0.1, 0.0, 1)) == 0.0);
}

TEST_CASE("first-order chain follows the Lambert law in the continuum limit") {
  const SystemParams p = params(400, 0.005, 0.3, 1);
  const SteadyStateSolution sol = solve_chain(p);
  const double el = elastic_power(sol);
  CHECK(el == doctest::Approx(lambert_power(400.0, p)).epsilon(1e-2));
}

TEST_CASE("optical depth of the correlation peak") {
  const auto v = od_star(0.125, 0.1);
  REQUIRE(v);
  CHECK(*v == doctest::Approx(std::log(3.0) + 1.0 + 0.2 - 1.0 / 3.0));
  CHECK_FALSE(od_star(1.0 / 30.0, 0.1).has_value());
  CHECK(od_star(1.0 / 24.0, 0.0).has_value());
}

TEST_CASE("powers and g2 agree with the exact chain") {
  for (const auto& [n, beta, ratio] : {std::tuple{1, 0.2, 0.3}, std::tuple{3, 0.1, 0.01}, std::tuple{4, 0.4, 1.0}}) {
    const SystemParams p = params(n, beta, ratio, std::min(n, 4));
    const SteadyStateSolution sol = solve_chain(p);
    const DensityMatrix rho = steady_state(build_liouvillian(p));
    const ExactPowers e = exact_powers(rho, p);
    const PowerBreakdown b = power_breakdown(sol);
    CHECK(b.p_in == doctest::Approx(e.p_in));
    CHECK(b.p_el == doctest::Approx(e.p_el).epsilon(1e-10));
    CHECK(b.p_ie == doctest::Approx(e.p_ie).epsilon(1e-9));
    CHECK(b.physical);
    const G2Result g = g2_zero(sol);
    CHECK(g.value == doctest::Approx(exact_g2(rho, p)).epsilon(1e-9));
    CHECK(g.p_out == doctest::Approx(e.p_out).epsilon(1e-10));
  }
  CHECK_FALSE(g2_zero(solve_chain(params(3, 0.1, 0.1, 2))).trusted_order);
  CHECK_THROWS(collective_moment(solve_chain(params(1, 0.1, 0.1, 1)), 3, 0));
}

TEST_CASE("correlation map") {
  const SteadyStateSolution sol = solve_chain(params(60, 0.1, 0.3, 2));
  const CorrelationMap m = correlation_map(sol);
  CHECK(m.n_atoms == 60);
  CHECK(m.at(2, 1) == 0.0);
  CHECK(m.at(1, 5) == sol.cumulants.value(CumulantKey::parse("x1 x5")));
  REQUIRE(m.j_star_predicted);
  CHECK(m.od_star_numeric == doctest::Approx(0.4 * m.j_star_numeric));
  for (int j = 2; j <= 60; ++j) CHECK(std::abs(m.at(1, j)) <= std::abs(m.at(1, m.j_star_numeric)));
  // the product formula is the leading order in beta
  const auto approx = first_row_correlation_approx(sol.params);
  CHECK(approx[2] == doctest::Approx(m.at(1, 2)).epsilon(0.15));
  CHECK_THROWS(correlation_map(solve_chain(params(3, 0.1, 0.1, 1))));
}

TEST_CASE("mandel q and single-atom sources") {
  CHECK(mandel_q(2.0, 1.5, 0.5) == doctest::Approx(0.5));
  CHECK(mandel_q(2.0, 0.0, 0.5) == doctest::Approx(-1.0));
  CHECK_THROWS(mandel_q(1.0, 0.0, 0.0));
  CHECK(single_atom_tau(3.0) == doctest::Approx(0.5));
  const SourceInputs in = single_atom_source(1.0, 0.2);
  CHECK(in.p_out == doctest::Approx(0.05));
  CHECK(in.g2 == 0.0);
  CHECK(mandel_q(in.p_out, in.g2, in.tau) == doctest::Approx(single_atom_q(1.0, 0.2)));
  // the single-atom optimum sits at s = 2 with Q = -beta / 3^{3/2}
  CHECK(single_atom_q(2.0, 1.0) == doctest::Approx(-1.0 / std::pow(3.0, 1.5)));
  CHECK(single_atom_q(2.0, 1.0) < single_atom_q(1.9, 1.0));
  CHECK(single_atom_q(2.0, 1.0) < single_atom_q(2.1, 1.0));
}
