#pragma once

#include "fanih/fan.hpp"
#include "fanih/graded.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fanih {

struct NotASubfan : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotPerverse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sheaf of graded modules on the face poset of a fan: F_sigma is a module
/// over A_sigma = Sym(V_sigma^*) in the coordinates of the cone's span basis,
/// with degree-0 restrictions along covering pairs. All stalks share the
/// degree window [lo, hi].
struct FanSheaf {
  std::shared_ptr<const Fan> fan;
  int lo = 0;
  int hi = 0;
  std::vector<DegreewiseModule> stalks;
  /// (sigma, tau) with tau <_1 sigma -> blocks[k - lo] : F_sigma^k -> F_tau^k.
  std::map<std::pair<int, int>, std::vector<Matrix>> restrictions;

  const DegreewiseModule& stalk(int c) const { return stalks.at(static_cast<std::size_t>(c)); }
  const Matrix& restriction(int sigma, int tau, int k) const;
  /// Composite restriction F_sigma^k -> F_tau^k for tau <= sigma, along the
  /// chain through the first facet containing tau.
  Matrix restrict(int sigma, int tau, int k) const;
  std::string dims_text() const;
};

/// The ring a space of sections is viewed over: nvars coordinates, pulled back
/// to each cone sigma by forms(sigma) (rows: ring variables in sigma coordinates).
struct RingMap {
  int nvars = 0;
  std::function<Matrix(int)> forms;
};
RingMap ambient_ring(const Fan& fan);
/// A_tau, for subfans of <tau>.
RingMap cone_ring(const Fan& fan, int tau);
/// B_tau of the target of a fan map, for subfans of the preimage of tau.
RingMap target_ring(const FanMap& f, int tau);

/// Sections of a sheaf over a subfan: compatible tuples over its maximal
/// cones, as a module over the given ring.
struct Sections {
  Subfan cones;
  std::vector<int> maximal;
  int lo = 0;
  int hi = -1;
  DegreewiseModule module;
  std::vector<ColumnSpace<Scalar>> spaces;     // spaces[k - lo] inside the tuple space
  std::vector<std::vector<Index>> offsets;     // offsets[k - lo][i], start of component i

  const ColumnSpace<Scalar>& space(int k) const { return spaces[static_cast<std::size_t>(k - lo)]; }
  /// F_cone^k x dim: the value at a cone of the subfan of each basis section.
  Matrix values_at(const FanSheaf& f, int cone, int k) const;
  /// Coordinates of a tuple (components at the maximal cones, stacked), or nullopt.
  std::optional<Vector> coords(int k, const Vector& tuple) const;
};

Sections sections_over(const FanSheaf& f, const Subfan& sub, const RingMap& ring);
/// Sections over sub vanishing on the subfan sub0.
Sections relative_sections(const FanSheaf& f, const Subfan& sub, const Subfan& sub0, const RingMap& ring);
/// F_(sigma, boundary sigma) as an A_sigma-module.
Sections relative_stalk(const FanSheaf& f, int sigma);
/// Sections over the boundary of sigma as an A_sigma-module.
Sections boundary_sections(const FanSheaf& f, int sigma);
/// The restriction F_sigma^k -> F_{boundary sigma}^k in section coordinates.
Matrix boundary_map(const FanSheaf& f, const Sections& boundary, int sigma, int k);

Subfan boundary_of_cone(const Fan& fan, int sigma);

FanSheaf structure_sheaf(std::shared_ptr<const Fan> fan, int hi);
FanSheaf zero_sheaf(std::shared_ptr<const Fan> fan, int lo, int hi);

/// The simple sheaf _sigma L (A_sigma at sigma, minimal extension over the open
/// star, zero elsewhere), stalks truncated at hi.
FanSheaf simple_sheaf(std::shared_ptr<const Fan> fan, int sigma, int hi);
/// The intersection cohomology sheaf E = _o L.
FanSheaf minimal_extension(std::shared_ptr<const Fan> fan, int hi);
/// _sigma L built as the pullback of E on the transversal fan, restricted to the open star.
FanSheaf simple_sheaf_via_transversal(std::shared_ptr<const Fan> fan, int sigma, int hi);

struct PerversityReport {
  bool perverse = false;
  std::string witness;  // first failing cone, empty when perverse
  explicit operator bool() const { return perverse; }
};
/// Pointwise free and flabby (every F_sigma -> F_{boundary sigma} surjective).
PerversityReport is_perverse(const FanSheaf& f);

/// Characterization of _sigma L: F-bar_sigma is K in degree 0, and
/// F-bar_tau -> F-bar_{boundary tau} is bijective for tau != sigma.
bool verify_simple_characterization(const FanSheaf& f, int sigma);

/// f^* G on the source fan (zero outside the domain of the map). Stalks of G
/// must be free with stored generators.
FanSheaf pullback(const FanMap& f, const FanSheaf& g);
/// Extension by zero: keep only the stalks on the given cones (an open subset).
FanSheaf restrict_to_open(const FanSheaf& f, const std::vector<int>& open);

struct Pushforward {
  FanSheaf sheaf;
  std::vector<Sections> sections;  // per target cone, sections over its preimage
};
Pushforward pushforward(const FanMap& f, const FanSheaf& g);

/// A degree-0 morphism L -> F out of a sheaf with free stalks, determined by
/// the images of the stalk generators: images[nu][l] in F_nu, raising degrees
/// by shift.
struct FreeMorphism {
  int shift = 0;
  std::vector<std::vector<Vector>> images;
  Matrix block(const FanSheaf& source, const FanSheaf& target, int nu, int k) const;
};

struct Summand {
  int cone = 0;
  int degree = 0;        // _sigma L is shifted so its generator sits in this degree
  FreeMorphism embedding;
};
struct Decomposition {
  std::vector<Summand> summands;
  std::map<int, FanSheaf> simple;   // _sigma L per occurring cone, unshifted
  std::map<int, std::vector<int>> multiplicities;  // cone -> degrees of K_sigma
  bool isomorphism = false;         // the assembled map is bijective on every stalk
};
/// F = sum over sigma of _sigma L tensor K_sigma, K_sigma = ker(F-bar_sigma -> F-bar_{boundary sigma}).
Decomposition decompose(const FanSheaf& f);

/// Solution space of degree-0 sheaf morphisms F -> G (F with free stalks); each
/// column lists the generator images cone by cone.
struct MorphismSpace {
  Matrix basis;
  std::vector<std::vector<Index>> offsets;  // offsets[nu][l] into a column
  FreeMorphism morphism(const Vector& column, const FanSheaf& source, const FanSheaf& target) const;
};
MorphismSpace sheaf_morphisms(const FanSheaf& source, const FanSheaf& target);

}  // namespace fanih
