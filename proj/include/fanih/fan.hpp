#pragma once

#include "fanih/poly.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fanih {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyInput : GeometryError {
  EmptyInput() : GeometryError("EmptyInput: no generators") {}
};
struct NotStrictlyConvex : GeometryError {
  using GeometryError::GeometryError;
};
struct NotAFan : GeometryError {
  using GeometryError::GeometryError;
};
struct NotPure : GeometryError {
  using GeometryError::GeometryError;
};
struct ConeNotInFan : GeometryError {
  using GeometryError::GeometryError;
};
struct RayOutsideSupport : GeometryError {
  using GeometryError::GeometryError;
};

/// Extreme rays of the pointed cone {x : a x >= 0} by the double description
/// method. Requires rank(a) == a.cols(); generators are returned as columns,
/// scaled so their first nonzero entry is +-1.
Matrix cone_generators(const Matrix& a);

/// Scale v by a positive factor so its first nonzero entry has absolute value 1.
Vector normalize_ray(const Vector& v);
bool positively_proportional(const Vector& u, const Vector& v);

/// A strictly convex polyhedral cone, described both by extreme rays and by
/// facet forms on its linear span.
struct Cone {
  std::vector<Vector> rays;              // extreme ray generators, input order
  std::vector<Vector> non_extreme;       // input generators that are not extreme
  Index ambient_dim = 0;
  Index dim = 0;
  Matrix basis;                          // ambient_dim x dim, basis of the span
  Matrix facet_forms;                    // one row per facet, in span coordinates
  Matrix left_inverse;                   // dim x ambient_dim, coordinates on the span

  Vector coordinates(const Vector& v) const { return mul<Scalar>(left_inverse, v); }
  bool in_span(const Vector& v) const;
  bool contains(const Vector& v) const;
  /// Facet forms extended to the ambient space (rows) and forms cutting out the span.
  Matrix inequalities() const;
  bool is_simplicial() const { return static_cast<Index>(rays.size()) == dim; }
};

/// Throws EmptyInput or NotStrictlyConvex. For full-dimensional cones the span
/// basis is the standard basis of the ambient space.
Cone build_cone(const std::vector<Vector>& generators);

struct FanCone {
  int id = 0;
  std::vector<int> rays;   // sorted global ray indices
  Cone geometry;
  std::vector<int> facets;    // covering faces tau <_1 sigma
  std::vector<int> cofacets;  // cones having this one as a facet
  Index dim() const { return geometry.dim; }
};

/// Sorted, face-closed set of cone ids of a fan.
using Subfan = std::vector<int>;

class Fan {
 public:
  Index ambient_dim() const { return ambient_dim_; }
  Field field() const { return field_; }
  const std::vector<Vector>& rays() const { return rays_; }
  const std::vector<FanCone>& cones() const { return cones_; }
  const FanCone& cone(int id) const { return cones_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(cones_.size()); }
  int zero_cone() const { return 0; }

  /// Cone id for a sorted ray index set, or -1.
  int find(const std::vector<int>& rays) const;
  bool is_face(int tau, int sigma) const;
  std::vector<int> cones_of_dim(Index d) const;
  std::vector<int> maximal_cones() const;
  std::vector<int> faces(int sigma) const;  // including sigma, ascending ids
  /// All covering pairs (sigma, tau) with tau <_1 sigma.
  std::vector<std::pair<int, int>> covering_pairs() const;

  bool is_pure() const;
  bool is_complete() const;
  bool is_simplicial() const;
  /// Smallest cone containing v, or -1 when v is outside the support.
  int smallest_cone_containing(const Vector& v) const;

  /// Row i: the i-th coordinate function of V_from restricted to V_to (in V_to
  /// coordinates). Requires V_to inside V_from.
  Matrix restriction_forms(int from, int to) const;
  /// Row i: the i-th ambient coordinate restricted to V_to.
  Matrix ambient_forms(int to) const;

  Subfan all() const;
  Subfan closure(const std::vector<int>& generators) const;
  std::vector<int> maximal_in(const Subfan& s) const;

  std::string describe(int id) const;

  friend Fan assemble_fan(const std::vector<Cone>& maximal, Field field);

 private:
  int add_cone(std::vector<int> rays);

  Index ambient_dim_ = 0;
  Field field_;
  std::vector<Vector> rays_;
  std::vector<FanCone> cones_;
  std::map<std::vector<int>, int> index_;
};

/// Generate all faces, verify pairwise intersections are common faces, build
/// the face poset. Cone ids are sorted by dimension then by ray set; id 0 is o.
Fan assemble_fan(const std::vector<Cone>& maximal, Field field = {});

/// (n-1)-cones lying in exactly one n-cone, with their faces. Throws NotPure.
Subfan boundary_fan(const Fan& fan);

/// Closed star: union of <tau> over tau >= sigma. Throws ConeNotInFan.
Subfan star(const Fan& fan, int sigma);
/// Cones tau >= sigma.
std::vector<int> open_star(const Fan& fan, int sigma);

/// A linear map V -> W inducing a map of fans from a subfan of the source to
/// the target; assignment[c] is the smallest target cone containing f(c), -1
/// outside the domain.
struct FanMap {
  std::shared_ptr<const Fan> source;
  std::shared_ptr<const Fan> target;
  Matrix linear;                 // dim W x dim V
  std::vector<int> assignment;

  /// Source cones mapped into the target cone tau.
  Subfan preimage(int tau) const;
  /// Row i: the i-th coordinate of W_tau pulled back to V_sigma coordinates.
  Matrix pullback_forms(int tau, int sigma) const;
};

/// Computes the assignment of a linear map on the given domain; throws NotAFan
/// when some image cone lies in no target cone.
FanMap make_fan_map(std::shared_ptr<const Fan> source, const Subfan& domain, std::shared_ptr<const Fan> target,
                    Matrix linear);

struct Transversal {
  std::shared_ptr<const Fan> fan;   // in V / V_sigma
  FanMap projection;                // from the star of sigma
  Matrix quotient;                  // (n - dim sigma) x n, kernel V_sigma
};
Transversal transversal_fan(std::shared_ptr<const Fan> fan, int sigma);

struct Refinement {
  std::shared_ptr<const Fan> fan;
  FanMap map;  // identity of V, refined fan -> original fan
};

/// Stellar subdivision at a ray of the support. Throws RayOutsideSupport.
Refinement stellar_subdivide(std::shared_ptr<const Fan> fan, const Vector& ray);
/// Iterated stellar subdivision at the ray sum of non-simplicial cones,
/// highest dimension first.
Refinement simplicialize(std::shared_ptr<const Fan> fan);
FanMap refinement_map(std::shared_ptr<const Fan> fine, std::shared_ptr<const Fan> coarse);

/// Orientation of every cone is its span basis (the standard orientation for
/// n-cones); epsilon(sigma, tau) = +1 iff (basis of V_tau, v) is positively
/// oriented in V_sigma for a ray v of sigma outside tau.
struct OrientationData {
  std::map<std::pair<int, int>, int> epsilon;
  int sign(int sigma, int tau) const { return epsilon.at({sigma, tau}); }
};
OrientationData orient_cones(const Fan& fan);

struct QuasiConvexity {
  bool quasi_convex = false;
  std::string reason;  // empty when quasi-convex
  explicit operator bool() const { return quasi_convex; }
};
QuasiConvexity is_quasi_convex(const Fan& fan);

/// Reduced rational Betti numbers of the order complex of a finite poset given
/// by its strict order relation (less[i][j] true iff i < j).
std::vector<Index> reduced_betti_of_order_complex(const std::vector<std::vector<bool>>& less);

}  // namespace fanih
