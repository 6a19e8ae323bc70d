#pragma once

#include "fanih/poly.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fanih {

struct CutoffTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatibleShapes : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotFree : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finitely generated graded module over K[x_1, ..., x_r], stored in polynomial
/// degrees lo..hi (polynomial degree k is topological degree 2k). Degrees below
/// lo are zero; degrees above hi are not represented.
struct DegreewiseModule {
  int nvars = 0;
  int lo = 0;
  int hi = -1;
  std::vector<Index> dims;                // dims[k - lo]
  std::vector<std::vector<Matrix>> mult;  // mult[k - lo][i] : M^k -> M^{k+1}, lo <= k < hi
  /// Set when the basis is the (generator, monomial) basis built by expand_free.
  std::optional<std::vector<int>> free_generators;

  bool in_range(int k) const { return k >= lo && k <= hi; }
  Index dim(int k) const { return in_range(k) ? dims[static_cast<std::size_t>(k - lo)] : 0; }
  /// Multiplication by x_i from degree k; requires lo <= k < hi.
  const Matrix& times(int i, int k) const {
    return mult[static_cast<std::size_t>(k - lo)][static_cast<std::size_t>(i)];
  }
  bool is_zero() const;
  std::string dims_text() const;
};

DegreewiseModule zero_module(int nvars, int lo, int hi);

/// Free module with generators in the given degrees, truncated at hi. The basis
/// of degree k lists generators in order, each followed by the monomials of
/// degree k - a_j in descending lex order. lo defaults to min(0, gens).
DegreewiseModule expand_free(int nvars, const std::vector<int>& gens, int hi);
DegreewiseModule expand_free(int nvars, const std::vector<int>& gens, int lo, int hi);

/// Same module on a different degree window (new degrees are zero / dropped).
DegreewiseModule with_range(const DegreewiseModule& m, int lo, int hi);

/// mult(x_i) mult(x_j) == mult(x_j) mult(x_i) in every degree.
bool multiplication_commutes(const DegreewiseModule& m);

/// M / mM degree by degree, with a complement basis of the image of the
/// multiplication maps chosen greedily among standard basis vectors.
struct Reduction {
  int lo = 0;
  int hi = -1;
  std::vector<Matrix> lifts;       // lifts[k - lo] : M^k x dim(bar M^k), columns are the lifts
  std::vector<Matrix> projection;  // projection[k - lo] : dim(bar M^k) x M^k
  Index dim(int k) const {
    return k >= lo && k <= hi ? lifts[static_cast<std::size_t>(k - lo)].cols() : 0;
  }
  std::vector<Index> dims() const;
};
Reduction reduction_mod_m(const DegreewiseModule& m);

/// Homogeneous elements of a module.
struct Generators {
  std::vector<int> degrees;
  std::vector<Vector> elements;
  std::size_t size() const { return degrees.size(); }
  int max_degree() const;
};

/// Lifts of a basis of the reduction, ordered by degree.
Generators minimal_generators(const DegreewiseModule& m);

/// Columns m * y over the monomials m of degree t (in monomial order), for y in M^b.
Matrix monomial_orbit(const DegreewiseModule& m, int b, const Vector& y, int t);

/// Matrix M^{b+t} x M^b of y -> sum_m c_m * m * y, coeffs indexed by the monomials of degree t.
Matrix action_matrix(const DegreewiseModule& m, int b, int t, const Vector& coeffs);

/// Matrices of the map from the free module on the generators to M, degree by
/// degree over [m.lo, m.hi]; columns in expand_free order.
std::vector<Matrix> expansion(const DegreewiseModule& m, const Generators& gens);

struct FreenessReport {
  bool free = false;
  int failing_degree = 0;
  std::vector<int> generator_degrees;
  explicit operator bool() const { return free; }
};
FreenessReport freeness_check(const DegreewiseModule& m);

/// Module over K[y_1..y_s] through the ring map y_i -> sum_j forms(i, j) x_j.
DegreewiseModule restrict_scalars(const DegreewiseModule& m, const Matrix& forms);

DegreewiseModule direct_sum(const std::vector<const DegreewiseModule*>& parts);

/// Submodule spanned degreewise by independent columns; the multiplication is
/// induced and closure under it is verified.
struct Submodule {
  DegreewiseModule module;
  std::vector<ColumnSpace<Scalar>> spaces;  // spaces[k - lo] inside the ambient degree k
  const ColumnSpace<Scalar>& space(int k) const { return spaces[static_cast<std::size_t>(k - module.lo)]; }
};
Submodule submodule(const DegreewiseModule& ambient, const std::vector<Matrix>& bases);

/// Kernel of a degree-preserving linear map given by blocks[k - lo] on M^k.
Submodule kernel_of(const DegreewiseModule& m, const std::vector<Matrix>& blocks);

/// Kernel of f - g for two degree-preserving maps M -> N given blockwise.
Submodule equalizer(const DegreewiseModule& m, const std::vector<Matrix>& f, const std::vector<Matrix>& g);

/// Graded Hom(M, N) for a free source M, parametrised by the images of the
/// minimal generators of M: Hom^d = sum_j N^{a_j + d}. Degrees run from
/// N.lo - a_max to N.hi - a_max so every generator image is visible.
struct HomModule {
  DegreewiseModule module;
  Generators source_generators;
  std::vector<Matrix> source_inverse_expansion;  // per source degree, free coordinates
  int source_lo = 0;

  /// Offset of the block of generator j inside Hom^d.
  Index offset(const DegreewiseModule& target, int d, std::size_t j) const;
  /// Matrix of f in Hom^d on source degree e: N^{e+d} x M^e.
  Matrix apply(const DegreewiseModule& target, int d, const Vector& f, int e) const;
  /// The linear map f -> f(w) from Hom^d to N^{e+d}, for w in M^e.
  Matrix evaluation(const DegreewiseModule& target, int d, const Vector& w, int e) const;
  /// Hom element of degree d with the given generator images.
  Vector from_images(const DegreewiseModule& target, int d, const std::vector<Vector>& images) const;
};
HomModule hom_degreewise(const DegreewiseModule& source, const DegreewiseModule& target);

/// Coordinates of an element of a free module built by expand_free as one
/// polynomial per generator, and back.
std::vector<Poly> free_polys(const DegreewiseModule& m, int k, const Vector& v);
Vector free_vector(const DegreewiseModule& m, int k, const std::vector<Poly>& comps);

/// Degree-preserving map between modules built by expand_free, determined by
/// the images of the source generators (one polynomial per target generator,
/// in the target ring) and the ring map x_i -> forms.row(i).
std::vector<Matrix> free_map(const DegreewiseModule& source, const DegreewiseModule& target, const Matrix& forms,
                             const std::vector<std::vector<Poly>>& images);

}  // namespace fanih
