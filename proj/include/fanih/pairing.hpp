#pragma once

#include "fanih/duality.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fanih {

struct NotSimplicial : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DenominatorNotCleared : std::logic_error {
  using std::logic_error::logic_error;
};
struct BoundarySupport : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SolutionSpaceNotOneDimensional : std::logic_error {
  using std::logic_error::logic_error;
};
struct NotComplete : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// omega = lambda * (e_1^* ^ ... ^ e_n^*).
struct VolumeForm {
  Scalar lambda = Scalar(1);
};

/// e(f) = sum over n-cones of f_sigma / (h_1 ... h_n), with facet forms
/// positive on the cone and h_1 ^ ... ^ h_n = +-omega. f lists one polynomial
/// in ambient coordinates per maximal cone, in maximal_cones() order.
Poly evaluation_map(const Fan& fan, const VolumeForm& omega, const std::vector<Poly>& f);

/// The normalized isomorphism E -> DE (1 -> 1^* at the zero cone).
struct DualityIsomorphism {
  DualSheaf dual;
  FreeMorphism map;
  Index solution_dimension = 0;
};
DualityIsomorphism duality_isomorphism(const FanSheaf& e);

/// Dimension of the degree-0 endomorphisms of a sheaf with free stalks.
Index rigidity_check(const FanSheaf& e);

/// E with its global sections, the relative sections and their reductions.
struct IHBases {
  FanSheaf e;
  Sections global;      // E_Delta
  Sections relative;    // E_(Delta, boundary Delta)
  Reduction ih;
  Reduction ih_relative;
};
IHBases ih_bases(std::shared_ptr<const Fan> fan, int hi);

/// Value tuple of a section: one vector per maximal cone.
std::vector<Vector> components(const Sections& s, int k, const Vector& coords);

/// Everything needed to evaluate the pairing E_Delta x E_(Delta, boundary Delta) -> A[-n].
struct PairingContext {
  std::shared_ptr<const Fan> fan;
  VolumeForm omega;
  IHBases bases;
  DualityIsomorphism di;
  GlobalDualIso global;

  /// The polynomial <a, b> in degree p + q - n (a, b in section coordinates).
  Poly pair(int p, const Vector& a, int q, const Vector& b) const;
  /// Matrix of <., .> on given columns of E_Delta^p and E_(Delta, boundary Delta)^q,
  /// for p + q = n.
  Matrix pair_matrix(int p, const Matrix& a, int q, const Matrix& b) const;
};
/// hi is the polynomial cutoff of E, at least n + 1.
PairingContext pairing_context(std::shared_ptr<const Fan> fan, const VolumeForm& omega, int hi = -1);

struct PairingReport {
  int n = 0;
  std::vector<Index> ih_dims;            // bar E_Delta by polynomial degree 0..n
  std::vector<Index> relative_dims;      // bar E_(Delta, boundary Delta)
  std::vector<Matrix> matrices;          // [p] : ih_dims[p] x relative_dims[n - p]
  std::vector<bool> nondegenerate;
  bool all_nondegenerate() const;
};
PairingReport ih_pairing(const PairingContext& ctx);
PairingReport ih_pairing(std::shared_ptr<const Fan> fan, const VolumeForm& omega, int hi = -1);

/// The same pairing through a simplicial refinement: E embeds in the
/// pushforward of the structure sheaf, sections are multiplied as piecewise
/// polynomials and evaluated on the refinement.
PairingReport pairing_via_refinement(std::shared_ptr<const Fan> fan, const VolumeForm& omega, int hi = -1);

struct VanishingReport {
  bool holds = false;
  std::string witness;
  explicit operator bool() const { return holds; }
};
/// bar E_sigma^k = 0 for 2k >= dim sigma and E_(sigma, boundary sigma)^k = 0 for
/// 2k <= dim sigma, on every nonzero cone.
VanishingReport check_vanishing(const FanSheaf& e);

/// Piecewise linear function, one linear form (ambient coordinates) per maximal cone.
struct ConvexFunction {
  struct Wall {
    int tau = 0;
    int below = 0;      // the cone whose form is extended
    int across = 0;     // the neighbour
    Scalar gap;         // psi - form(below) at a ray of the neighbour off the wall, > 0
  };
  std::map<int, Vector> forms;
  std::vector<Wall> walls;
};
/// Verifies agreement on walls and strict convexity; throws NotStrictlyConvex.
ConvexFunction convex_function(const Fan& fan, std::map<int, Vector> forms);
/// Support function of a polytope whose normal fan is the given fan.
ConvexFunction support_function(const Fan& fan, const std::vector<Vector>& vertices);
/// Tries psi = 1 on the stored rays, then (simplicial fans) random integer
/// heights on the rays from a fixed seed.
ConvexFunction strictly_convex_function(const Fan& fan);

struct LefschetzReport {
  std::vector<Matrix> matrices;       // [j] : L^{n - 2j} on bar E^j, 2j <= n
  std::vector<bool> bijective;
  bool hodge_riemann_checked = false;
  std::vector<bool> hodge_riemann;    // (-1)^j <a, L^{n-2j} a> positive definite on primitives
  std::string witness;
  bool passed() const;
};
/// Multiplication by psi on E_Delta induces L on IH; degrees are polynomial degrees.
LefschetzReport hard_lefschetz_check(const PairingContext& ctx, const ConvexFunction& psi, bool hodge_riemann = false);

}  // namespace fanih
