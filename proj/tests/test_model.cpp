#include "doctest.h"

#include <cmath>
#include <limits>

#include "chiral/model.hpp"

using namespace chiral;

TEST_CASE("validate accepts the documented domain") {
  const SystemParams p = validate({3, 0.5, 0.2, 4});
  CHECK(p.n_atoms == 3);
  CHECK(p.gamma == 1.0);
  CHECK_NOTHROW(validate({1, 1.0, 0.0, 1}));
}

TEST_CASE("validate rejects out-of-range parameters") {
  CHECK_THROWS_AS(validate({0, 0.1, 0.1, 2}), ValidationError);
  CHECK_THROWS_AS(validate({2, 0.0, 0.1, 2}), ValidationError);
  CHECK_THROWS_AS(validate({2, 1.5, 0.1, 2}), ValidationError);
  CHECK_THROWS_AS(validate({2, 0.1, -0.1, 2}), ValidationError);
  CHECK_THROWS_AS(validate({2, 0.1, std::numeric_limits<double>::quiet_NaN(), 2}), ValidationError);
  CHECK_THROWS_AS(validate({2, 0.1, 0.1, 0}), ValidationError);
  CHECK_THROWS_AS(validate({2, 0.1, 0.1, 5}), ValidationError);
}

TEST_CASE("derived scalars") {
  const DerivedScalars d = derive({25, 0.01, 0.3, 2});
  CHECK(d.optical_depth == doctest::Approx(1.0));
  CHECK(d.saturation_s == doctest::Approx(2.4));
  CHECK(d.alpha_1 == doctest::Approx(std::sqrt(0.3)));
  const SystemParams p{1, 0.2, 0.5, 1};
  CHECK(saturation_power(p) == doctest::Approx(5.0));
  CHECK(input_power(p) == doctest::Approx(2.5));
  CHECK(drive_ratio_from_s(2.0) == doctest::Approx(0.25));
}
