#include "doctest.h"

#include <cmath>
#include <functional>
#include <set>

#include "chiral/partitions.hpp"
#include "test_support.hpp"

using namespace chiral;
using testing_support::expectation;
using testing_support::random_state;

namespace {

// Restricted growth strings: an independent enumeration of set partitions.
std::vector<std::vector<int>> rgs(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(k, 0);
  std::function<void(int, int)> rec = [&](int i, int m) {
    if (i == k) {
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= m + 1; ++v) {
      a[i] = v;
      rec(i + 1, std::max(m, v));
    }
  };
  if (k > 0) rec(1, 0);
  return out;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Moebius inversion over the partition lattice written directly from RGS.
double rgs_cumulant(const CumulantKey& key, const KeyFunction& m) {
  const int k = key.order();
  double total = 0.0;
  for (const auto& g : rgs(k)) {
    const int blocks = *std::max_element(g.begin(), g.end()) + 1;
    double prod = 1.0;
    for (int b = 0; b < blocks; ++b) {
      unsigned mask = 0;
      for (int i = 0; i < k; ++i)
        if (g[i] == b) mask |= 1u << i;
      prod *= m(key.subset(mask));
    }
    total += ((blocks - 1) % 2 ? -1.0 : 1.0) * factorial(blocks - 1) * prod;
  }
  return total;
}

}  // namespace

TEST_CASE("partition counts are the Bell numbers") {
  const int bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (int k = 1; k <= 6; ++k) {
    const auto& parts = enumerate_partitions(k);
    CHECK(static_cast<int>(parts.size()) == bell[k]);
    std::set<std::vector<unsigned>> seen;
    for (const auto& p : parts) {
      unsigned cover = 0;
      for (unsigned m : p.block_masks) {
        CHECK((cover & m) == 0u);
        cover |= m;
      }
      CHECK(cover == (1u << k) - 1);
      auto sorted = p.block_masks;
      std::sort(sorted.begin(), sorted.end());
      seen.insert(sorted);
    }
    CHECK(seen.size() == parts.size());
  }
  CHECK(partition_weight(1) == 1);
  CHECK(partition_weight(3) == 2);
  CHECK(partition_weight(4) == -6);
}

TEST_CASE("cumulants of a random state match the lattice inversion") {
  const int n = 4;
  const Eigen::MatrixXcd rho = random_state(n, 11);
  const KeyFunction m = [&](const CumulantKey& k) { return k.empty() ? 1.0 : expectation(rho, k, n); };
  for (const char* text : {"x1 y2", "z1 x3 y4", "x1 y2 z3 x4", "y2 y3"}) {
    const CumulantKey key = CumulantKey::parse(text);
    CHECK(cumulant_from_moments(key, m) == doctest::Approx(rgs_cumulant(key, m)).epsilon(1e-12));
  }
}

TEST_CASE("table conversions round trip and product states have no connected part") {
  const int n = 4;
  const Eigen::MatrixXcd rho = random_state(n, 5);
  MomentTable moments(n, 4);
  moments.for_each([&](const CumulantKey& k, double) { moments.at(k) = expectation(rho, k, n); });
  const CumulantTable cumulants = cumulants_from_moments(moments);
  const MomentTable back = moments_from_cumulants(cumulants);
  moments.for_each([&](const CumulantKey& k, double v) { CHECK(back.value(k) == doctest::Approx(v).epsilon(1e-12)); });
  CHECK(moment_from_cumulants(CumulantKey::parse("x1 y2 z3 x4"), cumulants) ==
        doctest::Approx(moments.value(CumulantKey::parse("x1 y2 z3 x4"))));

  // product state: only single-site cumulants survive
  MomentTable prod(n, 3);
  const double mean[3] = {0.1, -0.4, 0.3};
  prod.for_each([&](const CumulantKey& k, double) {
    double v = 1.0;
    for (int i = 0; i < k.order(); ++i) v *= mean[static_cast<int>(k.axis(i))] * (1.0 + 0.1 * k.atom(i));
    prod.at(k) = v;
  });
  cumulants_from_moments(prod).for_each([](const CumulantKey& k, double v) {
    if (k.order() > 1) CHECK(std::abs(v) < 1e-15);
  });
}

TEST_CASE("closure expansion equals the moment with a vanishing top cumulant") {
  const int n = 4;
  const Eigen::MatrixXcd rho = random_state(n, 2);
  MomentTable moments(n, 2);
  moments.for_each([&](const CumulantKey& k, double) { moments.at(k) = expectation(rho, k, n); });
  const CumulantTable c = cumulants_from_moments(moments);
  const CumulantKey key = CumulantKey::parse("x1 z2 y4");
  const double closed = closure_expand(key, c);
  CHECK(closed == doctest::Approx(moment_from_cumulants(key, c)).epsilon(1e-13));
  // m(abc) = k(ab)m(c) + k(ac)m(b) + k(bc)m(a) + m(a)m(b)m(c) when k(abc) = 0
  const double ma = moments.value(CumulantKey::parse("x1")), mb = moments.value(CumulantKey::parse("z2")),
               mc = moments.value(CumulantKey::parse("y4"));
  const double expect = c.value(CumulantKey::parse("x1 z2")) * mc + c.value(CumulantKey::parse("x1 y4")) * mb +
                        c.value(CumulantKey::parse("z2 y4")) * ma + ma * mb * mc;
  CHECK(closed == doctest::Approx(expect).epsilon(1e-13));
  CHECK_THROWS(closure_expand(CumulantKey::parse("x1 y2"), c));
}
