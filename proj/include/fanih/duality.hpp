#pragma once

#include "fanih/sheaf.hpp"

#include <string>
#include <vector>

namespace fanih {

struct ChainInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};
struct ComparisonNotBijective : std::logic_error {
  using std::logic_error::logic_error;
};
struct NotQuasiConvex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct WrongKernel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotAFacet : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// D F with the data it was built from. (DF)_sigma^k is
/// Hom^{k - dim sigma}(F_(sigma, boundary sigma), A_sigma), tensored with the
/// determinant line of V_sigma^* generated by the wedge of the span coordinates.
struct DualSheaf {
  FanSheaf sheaf;
  std::vector<Sections> relative;        // F_(sigma, boundary sigma)
  std::vector<HomModule> homs;           // Hom(F_(sigma, boundary sigma), A_sigma)
  std::vector<DegreewiseModule> rings;   // A_sigma, the Hom targets
  OrientationData orientation;

  /// Hom degree of (DF)_sigma^k.
  int hom_degree(int sigma, int k) const { return k - static_cast<int>(sheaf.fan->cone(sigma).dim()); }
};

/// The stalk (DF)_sigma on its own; generator degrees are dim sigma - a_i.
DegreewiseModule dual_module(const FanSheaf& f, int sigma);

/// r^sigma_tau = phi_h (x) psi_h for a facet tau of sigma and a form h on V_sigma
/// (sigma coordinates) with kernel V_tau, blockwise over the window of d.
std::vector<Matrix> facet_restriction(const FanSheaf& f, const DualSheaf& d, int sigma, int tau, const Vector& h);

/// Builds DF with rho = epsilon * r; throws ChainInconsistency when two chains
/// through a codimension-2 face disagree.
DualSheaf dual_sheaf(const FanSheaf& f, const OrientationData& orient);
DualSheaf dual_sheaf(const FanSheaf& f);

/// First 2-flag whose two composites differ, or empty.
std::string chain_inconsistency(const FanSheaf& f);

PerversityReport verify_perverse_dual(const FanSheaf& f);

/// (DF)_Delta -> Hom(F_(Delta, boundary Delta), A) (x) det V^*, psi -> (psi o ext_sigma)
/// over the n-cones; matrices map Hom coordinates to section coordinates.
struct GlobalDualIso {
  int lo = 0;
  int hi = -1;
  Sections relative;           // F_(Delta, boundary Delta)
  DegreewiseModule ring;       // A
  HomModule hom;               // Hom(F_(Delta, boundary Delta), A)
  Sections dual_sections;      // (DF)_Delta
  std::vector<Matrix> matrices;  // [k - lo] : Hom^{k - n} -> (DF)_Delta^k
  bool bijective = false;
  const Matrix& matrix(int k) const { return matrices[static_cast<std::size_t>(k - lo)]; }
};
GlobalDualIso global_dual_iso(const FanSheaf& f, const DualSheaf& d);

/// (DF)_(sigma, boundary sigma) equals the restrictions of Hom(F_sigma, A_sigma), degree by degree.
bool relative_dual_check(const FanSheaf& f, const DualSheaf& d, int sigma);

struct BidualityReport {
  bool stalkwise = false;   // every beta_sigma bijective
  bool natural = false;     // commutes with all restrictions
  std::string witness;
  explicit operator bool() const { return stalkwise && natural; }
};
/// beta: F -> D(DF), x -> (psi restricted -> psi(x)).
BidualityReport biduality(const FanSheaf& f);

}  // namespace fanih
