#include "doctest.h"

#include <set>

#include "chiral/key_index.hpp"
#include "chiral/pauli.hpp"

using namespace chiral;

TEST_CASE("pauli products") {
  using C = std::complex<double>;
  const auto xy = pauli_multiply(Axis::x, Axis::y);
  CHECK(xy.result == Pauli::z);
  CHECK(xy.coefficient == C(0, 1));
  const auto yx = pauli_multiply(Axis::y, Axis::x);
  CHECK(yx.result == Pauli::z);
  CHECK(yx.coefficient == C(0, -1));
  const auto zz = pauli_multiply(Axis::z, Axis::z);
  CHECK(zz.result == Pauli::identity);
  CHECK(zz.coefficient == C(1, 0));
  CHECK(pauli_multiply(Pauli::identity, Pauli::y).result == Pauli::y);
}

TEST_CASE("keys are canonical") {
  const CumulantKey k = CumulantKey::parse("z3 x1");
  CHECK(k.to_string() == "x1 z3");
  CHECK(k == CumulantKey({{1, Axis::x}, {3, Axis::z}}));
  CHECK(CumulantKey::parse("x1,z3") == k);
  CHECK_THROWS(CumulantKey::parse("x1 y1"));
  CHECK_THROWS(CumulantKey({{3, Axis::x}, {1, Axis::z}}));
  CHECK(k.with_site({2, Axis::y}).to_string() == "x1 y2 z3");
  CHECK(k.with_site({3, Axis::y}).to_string() == "x1 y3");
  CHECK(k.erase(0).to_string() == "z3");
  CHECK(k.subset(2u).to_string() == "z3");
  CHECK(k.find_atom(3) == 1);
  CHECK(k.find_atom(2) == -1);
}

TEST_CASE("layout index is a bijection with stage slices") {
  const KeyLayout layout(7, 3);
  for (int k = 1; k <= 3; ++k) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < layout.block_size(k); ++i) {
      const CumulantKey key = layout.key_at(k, i);
      CHECK(layout.index(key) == i);
      seen.insert(key.to_string());
      // keys on atoms 1..n come first
      CHECK(i >= layout.block_size(k, key.max_atom() - 1));
      CHECK(i < layout.block_size(k, key.max_atom()));
    }
    CHECK(seen.size() == layout.block_size(k));
  }
  int order;
  const CumulantKey key = CumulantKey::parse("x2 y4 z6");
  CHECK(layout.subset_index(key, 5u, order) == layout.index(key.subset(5u)));
  CHECK(order == 2);
}

TEST_CASE("tables truncate to prefixes and reject foreign keys") {
  CumulantTable t(5, 2);
  t.set(CumulantKey::parse("x1 y2"), 0.5);
  t.set(CumulantKey::parse("z5"), -0.25);
  const CumulantTable s = t.truncated(2);
  CHECK(s.value(CumulantKey::parse("x1 y2")) == 0.5);
  CHECK_THROWS(s.value(CumulantKey::parse("z5")));
  CHECK_THROWS(t.value(CumulantKey::parse("x1 y2 z3")));
  CHECK(is_reduced_key(CumulantKey::parse("x1 x2")));
  CHECK_FALSE(is_reduced_key(CumulantKey::parse("x1 y2")));
}
