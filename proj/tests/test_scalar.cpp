#include "catch_amalgamated.hpp"

#include "fanih/scalar.hpp"

#include <random>

using fanih::Field;
using fanih::Rational;
using fanih::Scalar;

TEST_CASE("rational arithmetic is exact") {
  CHECK(Scalar::fraction(1, 2) + Scalar::fraction(1, 3) == Scalar::fraction(5, 6));
  CHECK(Scalar::fraction(2, 4) == Scalar::fraction(1, 2));
  CHECK(Scalar(7) / Scalar(3) * Scalar(3) == Scalar(7));
  CHECK(to_string(Scalar::fraction(-6, 4)) == "-3/2");
  CHECK(to_string(Scalar(12)) == "12");
}

TEST_CASE("quadratic arithmetic") {
  const Scalar r5 = Scalar::sqrt(5);
  CHECK(r5 * r5 == Scalar(5));
  // 81/16 > 5, so sqrt(5) < 9/4; 2.23^2 < 5 < 2.24^2
  CHECK((r5 - Scalar::fraction(9, 4)).sign() == -1);
  CHECK((r5 - Scalar::fraction(223, 100)).sign() == 1);
  CHECK((r5 - Scalar::fraction(224, 100)).sign() == -1);
  const Scalar x = Scalar(2) + r5;
  CHECK(x * x.inverse() == Scalar(1));
  CHECK((Scalar(1) - r5).sign() == -1);
  CHECK(Scalar(3) - r5 > Scalar(0));
  CHECK(abs(Scalar(2) - r5) == r5 - Scalar(2));
}

TEST_CASE("field mismatch and division by zero") {
  CHECK_THROWS_AS(Scalar::sqrt(2) + Scalar::sqrt(3), fanih::FieldMismatch);
  CHECK_THROWS_AS(Scalar::sqrt(2) * Scalar::sqrt(5), fanih::FieldMismatch);
  CHECK_THROWS_AS(Scalar(1) / Scalar(0), fanih::DivisionByZero);
  CHECK_THROWS_AS((Scalar::sqrt(5) - Scalar::sqrt(5)).inverse(), fanih::DivisionByZero);
  CHECK_NOTHROW(Scalar::sqrt(2) * Scalar(3));
}

TEST_CASE("negative denominators") {
  CHECK(Scalar::fraction(3, -4) == -Scalar::fraction(3, 4));
  CHECK(fanih::parse_scalar("3/-4") == Scalar::fraction(-3, 4));
}

TEST_CASE("field descriptors") {
  CHECK(Field::parse("q").is_rational());
  CHECK(Field::parse("quad:5").radicand == 5);
  CHECK_THROWS_AS(Field::parse("quad:4"), fanih::ParseError);
  CHECK_THROWS_AS(Field::parse("quad:x"), fanih::ParseError);
  CHECK(Field::parse("quad:7").to_string() == "quad:7");
}

TEST_CASE("parse and render round trip") {
  const Field f = Field::quadratic(5);
  for (const char* text : {"0", "-3", "5/6", "sqrt(5)", "-1*sqrt(5)", "2-1*sqrt(5)", "1/2+3/4*sqrt(5)", "-7/3*sqrt(5)"}) {
    const Scalar x = fanih::parse_scalar(text, f);
    CHECK(fanih::parse_scalar(to_string(x), f) == x);
  }
  CHECK(fanih::parse_scalar("sqrt(5)", f) == Scalar::sqrt(5));
  CHECK(fanih::parse_scalar("2-sqrt(5)", f) == Scalar(2) - Scalar::sqrt(5));
  CHECK_THROWS_AS(fanih::parse_scalar("sqrt(3)", f), fanih::FieldMismatch);
  CHECK_THROWS_AS(fanih::parse_scalar("1/0"), fanih::ParseError);
  CHECK_THROWS_AS(fanih::parse_scalar("abc"), fanih::ParseError);
}

TEST_CASE("sign agrees with the real embedding") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-40, 40);
  for (int i = 0; i < 500; ++i) {
    const int a = dist(rng), b = dist(rng), c = dist(rng) == 0 ? 1 : dist(rng);
    const Scalar x(Scalar::fraction(a, c == 0 ? 1 : c).rational_part(), Scalar::fraction(b, 7).rational_part(), 3);
    const double approx = static_cast<double>(a) / (c == 0 ? 1 : c) + b / 7.0 * std::sqrt(3.0);
    if (std::abs(approx) > 1e-9) CHECK(x.sign() == (approx > 0 ? 1 : -1));
  }
}

TEST_CASE("field axioms on random elements") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dist(-9, 9);
  auto draw = [&] { return Scalar(Scalar::fraction(dist(rng), 1 + std::abs(dist(rng))).rational_part(), Scalar::fraction(dist(rng), 2).rational_part(), 2); };
  for (int i = 0; i < 200; ++i) {
    const Scalar x = draw(), y = draw(), z = draw();
    CHECK((x + y) * z == x * z + y * z);
    CHECK((x * y) * z == x * (y * z));
    if (!y.is_zero()) CHECK(x / y * y == x);
  }
}
