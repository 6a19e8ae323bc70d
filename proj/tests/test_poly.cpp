#include "catch_amalgamated.hpp"

#include "fanih/poly.hpp"

using namespace fanih;

TEST_CASE("monomial counts and ordering") {
  CHECK(monomial_count(2, 3) == 4);
  CHECK(monomial_count(3, 2) == 6);
  CHECK(monomial_count(0, 0) == 1);
  CHECK(monomial_count(0, 2) == 0);
  CHECK(monomial_count(2, -1) == 0);
  for (int r = 1; r <= 4; ++r) {
    for (int k = 0; k <= 4; ++k) {
      const auto& mons = monomials(r, k);
      REQUIRE(static_cast<Index>(mons.size()) == monomial_count(r, k));
      for (std::size_t i = 0; i < mons.size(); ++i) CHECK(monomial_index(mons[i]) == static_cast<Index>(i));
      for (std::size_t i = 1; i < mons.size(); ++i) CHECK(mons[i - 1] > mons[i]);
    }
  }
}

TEST_CASE("polynomial products and substitution") {
  const Poly x = Poly::variable(2, 0);
  const Poly y = Poly::variable(2, 1);
  const Poly p = (x + y) * (x - y);
  CHECK(p == x * x - y * y);
  CHECK(p.degree() == 2);
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(p.substitute(swap) == y * y - x * x);
  CHECK(((x + y).pow(3)).coefficient({2, 1}) == Scalar(3));
}

TEST_CASE("division by linear forms") {
  const Poly x = Poly::variable(3, 0);
  const Poly y = Poly::variable(3, 1);
  const Poly z = Poly::variable(3, 2);
  Vector l(3);
  l << 1, -2, 3;
  const Poly lf = Poly::linear(l);
  const Poly q = x * y + z * z * Scalar(5);
  auto d = (q * lf).divide_linear(l);
  REQUIRE(d);
  CHECK(*d == q);
  CHECK_FALSE((q + x * x * x).divide_linear(l));
}

TEST_CASE("substitution matrix agrees with polynomial substitution") {
  Matrix forms(2, 3);
  forms << 1, 2, 0, -1, 0, 3;
  const Poly p = Poly::from_coords(2, 2, (Vector(3) << 1, 4, -2).finished());
  const Matrix s = substitution_matrix(forms, 2);
  CHECK(mul<Scalar>(s, p.coords(2)) == p.substitute(forms).coords(2));
  const Matrix shift = variable_shift_matrix(2, 1, 2);
  CHECK(mul<Scalar>(shift, p.coords(2)) == (p * Poly::variable(2, 1)).coords(3));
}
