#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include <compare>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fanih {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero") {}
};

struct FieldMismatch : std::domain_error {
  FieldMismatch(int d1, int d2);
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Field descriptor: the rationals (radicand 0) or Q(sqrt(d)) for squarefree d >= 2.
struct Field {
  int radicand = 0;

  bool is_rational() const { return radicand == 0; }
  static Field rational() { return {}; }
  static Field quadratic(int d);
  /// "q" or "quad:d".
  static Field parse(std::string_view text);
  std::string to_string() const;
  bool operator==(const Field&) const = default;
};

bool is_squarefree(long d);

/// Element a + b*sqrt(d) of Q or of a real quadratic field.
///
/// Elements with b = 0 are field-agnostic and combine with any field; two
/// elements carrying different radicands raise FieldMismatch. Ordering is the
/// one induced by the real embedding with sqrt(d) > 0, decided exactly.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : a_(v) {}
  Scalar(long v) : a_(v) {}
  Scalar(long long v) : a_(v) {}
  Scalar(Rational a) : a_(std::move(a)) {}
  Scalar(Rational a, Rational b, int radicand);

  // Goes through mpz_int: mpq_rational(long, long) reads a negative denominator as unsigned.
  static Scalar fraction(long num, long den) { return Scalar(Rational(Integer(num), Integer(den))); }
  static Scalar sqrt(int radicand);

  const Rational& rational_part() const { return a_; }
  const Rational& irrational_part() const { return b_ ? *b_ : zero(); }
  int radicand() const { return d_; }
  Field field() const { return Field{d_}; }

  bool is_zero() const { return a_.is_zero() && !b_; }
  bool is_rational() const { return !b_; }
  int sign() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar operator-() const;

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;  // b_ is engaged only when nonzero
  }
  friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y);

  Scalar inverse() const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }

 private:
  int merged_radicand(const Scalar& o) const;
  void set_b(Rational b);
  static const Rational& zero();

  Rational a_;
  std::optional<Rational> b_;  // empty when zero; rational scalars skip the second allocation
  int d_ = 0;
};

int compare(const Scalar& x, const Scalar& y);

/// "p/q" for rationals (integers drop the denominator), "p/q+r/s*sqrt(d)"
/// otherwise. parse_scalar accepts both plus the bare forms "sqrt(d)" and
/// "r/s*sqrt(d)".
std::string to_string(const Scalar& x);
Scalar parse_scalar(std::string_view text, Field field = {});
std::ostream& operator<<(std::ostream& os, const Scalar& x);

inline Scalar abs(const Scalar& x) { return x.abs(); }

}  // namespace fanih

namespace Eigen {

template <>
struct NumTraits<fanih::Scalar> : GenericNumTraits<fanih::Scalar> {
  using Real = fanih::Scalar;
  using NonInteger = fanih::Scalar;
  using Nested = fanih::Scalar;
  using Literal = fanih::Scalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 32
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  static inline Real highest() { return Real(0); }
  static inline Real lowest() { return Real(0); }
};

}  // namespace Eigen
