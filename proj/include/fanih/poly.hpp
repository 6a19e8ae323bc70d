#pragma once

#include "fanih/linalg.hpp"
#include "fanih/scalar.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fanih {

using Matrix = Mat<Scalar>;
using Vector = Vec<Scalar>;
using Exponent = std::vector<int>;

/// Number of monomials of degree k in r variables (0 for k < 0).
Index monomial_count(int r, int k);

/// Monomials of degree k in r variables, descending lexicographic order. This
/// order is the basis order of every polynomial space in the library.
const std::vector<Exponent>& monomials(int r, int k);
Index monomial_index(const Exponent& e);

/// Sparse polynomial in a fixed number of variables. Polynomial degree k
/// corresponds to topological degree 2k.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}
  static Poly constant(int nvars, const Scalar& c);
  static Poly variable(int nvars, int i);
  /// Linear form sum_i c_i x_i.
  static Poly linear(const Vector& coeffs);
  /// Homogeneous polynomial of degree k from coordinates in the monomial basis.
  static Poly from_coords(int nvars, int k, const Vector& coords);

  int nvars() const { return nvars_; }
  const std::map<Exponent, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Degree of a homogeneous polynomial (-1 for zero); throws if inhomogeneous.
  int degree() const;
  Vector coords(int k) const;
  Scalar coefficient(const Exponent& e) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Scalar& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) = default;
  Poly pow(int e) const;

  /// Replace variable i by the linear form forms.row(i) in forms.cols() variables.
  Poly substitute(const Matrix& forms) const;
  /// Exact quotient by a nonzero linear form, or nullopt when it does not divide.
  std::optional<Poly> divide_linear(const Vector& form) const;

  std::string to_string() const;

 private:
  void add_term(const Exponent& e, const Scalar& c);

  int nvars_ = 0;
  std::map<Exponent, Scalar> terms_;
};

/// Matrix of the substitution x_i -> forms.row(i) on degree-k polynomials:
/// columns indexed by monomials in forms.rows() variables, rows by monomials in
/// forms.cols() variables.
Matrix substitution_matrix(const Matrix& forms, int k);

/// Matrix of multiplication by x_i from degree k to degree k+1.
Matrix variable_shift_matrix(int r, int i, int k);

}  // namespace fanih
