#include "catch_amalgamated.hpp"

#include "fanih/pairing.hpp"
#include "fixtures.hpp"

using namespace fanih;
using namespace fixtures;

namespace {

Scalar at_point(const Poly& f, const Vector& p) {
  Scalar sum(0);
  for (const auto& [e, c] : f.terms()) {
    Scalar t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) t *= p(static_cast<Index>(i));
    }
    sum += t;
  }
  return sum;
}

Matrix rays_of(const Fan& fan, int sigma) {
  const auto& c = fan.cone(sigma);
  Matrix r(fan.ambient_dim(), static_cast<Index>(c.rays.size()));
  for (std::size_t j = 0; j < c.rays.size(); ++j) r.col(static_cast<Index>(j)) = fan.rays()[c.rays[j]];
  return r;
}

/// Localization sum at a generic point, with the dual basis of each cone's rays
/// as denominators.
Scalar localization_oracle(const Fan& fan, const Scalar& lambda, const std::vector<Poly>& f, const Vector& p) {
  Scalar sum(0);
  const auto maximal = fan.maximal_cones();
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    const Matrix r = rays_of(fan, maximal[i]);
    const Vector dual = mul<Scalar>(fanih::inverse<Scalar>(r), p);
    Scalar denom = fanih::determinant<Scalar>(r).abs() * lambda;
    for (Index k = 0; k < dual.size(); ++k) denom *= dual(k);
    sum += at_point(f[i], p) / denom;
  }
  return sum;
}

/// Piecewise linear function with the given values on the rays.
std::vector<Poly> piecewise_linear(const Fan& fan, const std::vector<Scalar>& heights) {
  std::vector<Poly> out;
  for (int sigma : fan.maximal_cones()) {
    const Matrix rt = rays_of(fan, sigma).transpose();
    Vector h(rt.rows());
    for (Index i = 0; i < rt.rows(); ++i) h(i) = heights[static_cast<std::size_t>(fan.cone(sigma).rays[static_cast<std::size_t>(i)])];
    out.push_back(Poly::linear(*solve<Scalar>(rt, h)));
  }
  return out;
}

std::vector<Poly> times(const std::vector<Poly>& a, const std::vector<Poly>& b) {
  std::vector<Poly> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
  return out;
}

std::vector<Scalar> heights(std::size_t count, int seed) {
  std::vector<Scalar> h;
  for (std::size_t i = 0; i < count; ++i) h.emplace_back(static_cast<int>((i * 7 + static_cast<std::size_t>(seed) * 3) % 5) - 2);
  return h;
}

Poly constant(int n, const Scalar& c) { return Poly::constant(n, c); }

Scalar constant_term_of(const Poly& p) { return p.coefficient(Exponent(static_cast<std::size_t>(p.nvars()), 0)); }

/// Sign relating the two pairing routes under the stated orientation conventions.
int route_sign(int n) { return (n * (n - 1) / 2) % 2 == 0 ? 1 : -1; }

std::vector<Index> nonzero_dims(std::vector<Index> d) {
  while (!d.empty() && d.back() == 0) d.pop_back();
  return d;
}

std::vector<Index> as_index(const std::vector<long>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("evaluation map") {
  SECTION("line fan: e(|x|) = 2") {
    auto fan = line_fan();
    std::vector<Poly> f;
    for (int sigma : fan->maximal_cones()) {
      const Scalar s(fan->rays()[fan->cone(sigma).rays[0]](0).sign());
      f.push_back(Poly::variable(1, 0) * s);
    }
    CHECK(evaluation_map(*fan, {}, f) == constant(1, 2));
  }
  SECTION("quadrant: e(xy) = 1") {
    auto fan = quadrant();
    const Poly xy = Poly::variable(2, 0) * Poly::variable(2, 1);
    CHECK(evaluation_map(*fan, {}, {xy}) == constant(2, 1));
    // xy on the positive quadrant only, zero on the other three
    auto four = four_quadrants();
    const int pp = four->smallest_cone_containing(vec({1, 1}));
    std::vector<Poly> f;
    for (int sigma : four->maximal_cones()) f.push_back(sigma == pp ? xy : Poly(2));
    CHECK(evaluation_map(*four, {}, f) == constant(2, 1));
  }
  SECTION("degree below n gives zero") {
    auto fan = four_quadrants();
    CHECK(evaluation_map(*fan, {}, std::vector<Poly>(4, constant(2, 1))).is_zero());
    CHECK(evaluation_map(*fan, {}, std::vector<Poly>(4, Poly::variable(2, 0))).is_zero());
    CHECK(evaluation_map(*fan, {}, piecewise_linear(*fan, heights(4, 1))).is_zero());
  }
  SECTION("errors") {
    auto four = four_quadrants();
    std::vector<Poly> bump(4, Poly(2));
    bump[0] = constant(2, 1);
    CHECK_THROWS_AS(evaluation_map(*four, {}, bump), DenominatorNotCleared);
    CHECK_THROWS_AS(evaluation_map(*quadrant(), {}, {Poly::variable(2, 0)}), BoundarySupport);
    CHECK_THROWS_AS(evaluation_map(*cube_faces(), {}, std::vector<Poly>(6, Poly(3))), NotSimplicial);
  }
  SECTION("A-linearity and omega scaling") {
    auto fan = four_quadrants();
    const auto psi = piecewise_linear(*fan, std::vector<Scalar>(4, Scalar(1)));
    const Poly e = evaluation_map(*fan, {}, times(psi, psi));
    CHECK(e == constant(2, 8));
    const Poly x = Poly::variable(2, 0);
    CHECK(evaluation_map(*fan, {}, times(std::vector<Poly>(4, x), times(psi, psi))) == x * e);
    CHECK(evaluation_map(*fan, {Scalar(3)}, times(psi, psi)) == constant(2, Scalar::fraction(8, 3)));
  }
  SECTION("agrees with the localization sum at a generic point") {
    const Vector p2 = [] {
      Vector v(2);
      v << Scalar::fraction(3, 7), Scalar::fraction(-5, 11);
      return v;
    }();
    const Vector p3 = [] {
      Vector v(3);
      v << Scalar::fraction(3, 7), Scalar::fraction(-5, 11), Scalar::fraction(2, 13);
      return v;
    }();
    for (auto fan : {octants(), simplicialize(cube_faces()).fan, simplicialize(square_cone()).fan}) {
      const std::size_t r = fan->rays().size();
      const auto a = piecewise_linear(*fan, heights(r, 1));
      const auto b = piecewise_linear(*fan, heights(r, 2));
      const auto c = piecewise_linear(*fan, heights(r, 4));
      auto f = times(times(a, b), c);
      if (!fan->is_complete()) {
        // make it vanish on the boundary: multiply by a function zero on every boundary ray
        std::vector<Scalar> h(r, Scalar(0));
        for (std::size_t i = 0; i < r; ++i) {
          if (fan->rays()[i] == vec({0, 0, 1})) h[i] = Scalar(1);
        }
        f = times(f, piecewise_linear(*fan, h));
      }
      const Poly e = evaluation_map(*fan, {Scalar(2)}, f);
      CHECK(at_point(e, p3) == localization_oracle(*fan, Scalar(2), f, p3));
      const auto g = times(f, a);
      CHECK(at_point(evaluation_map(*fan, {}, g), p3) == localization_oracle(*fan, Scalar(1), g, p3));
    }
    auto fan = sqrt5_fan();
    const auto a = piecewise_linear(*fan, heights(5, 1));
    const auto b = piecewise_linear(*fan, heights(5, 3));
    CHECK(at_point(evaluation_map(*fan, {}, times(a, b)), p2) == localization_oracle(*fan, Scalar(1), times(a, b), p2));
  }
}

TEST_CASE("duality isomorphism and rigidity") {
  for (auto fan : {quadrant(), four_quadrants(), square_cone(), cube_faces()}) {
    const FanSheaf e = minimal_extension(fan, static_cast<int>(fan->ambient_dim()) + 1);
    const DualityIsomorphism di = duality_isomorphism(e);
    CHECK(di.solution_dimension == 1);
    CHECK(di.map.images[0][0] == Vector::Constant(1, Scalar(1)));
    // an isomorphism on every stalk
    for (int c = 0; c < fan->size(); ++c) {
      for (int k = e.lo; k <= e.hi; ++k) {
        const Matrix b = di.map.block(e, di.dual.sheaf, c, k);
        CHECK(b.rows() == b.cols());
        CHECK(fanih::rank<Scalar>(b) == b.rows());
      }
    }
    CHECK(rigidity_check(e) == 1);
  }
}

TEST_CASE("intersection pairing") {
  SECTION("four quadrants") {
    const PairingReport r = ih_pairing(four_quadrants(), {});
    CHECK(r.ih_dims == std::vector<Index>{1, 2, 1});
    CHECK(r.relative_dims == std::vector<Index>{1, 2, 1});
    CHECK(r.matrices[1].rows() == 2);
    CHECK(r.all_nondegenerate());
  }
  SECTION("quadrant: (1, xy) pairs to a nonzero constant") {
    const PairingContext ctx = pairing_context(quadrant(), {});
    const PairingReport r = ih_pairing(ctx);
    CHECK(nonzero_dims(r.ih_dims) == std::vector<Index>{1});
    CHECK(r.relative_dims == std::vector<Index>{0, 0, 1});
    REQUIRE(r.matrices[0].size() == 1);
    CHECK_FALSE(r.matrices[0](0, 0).is_zero());
    // the pairing lands in A[-n]: (1, x^2 y) gives a linear form
    const Sections& rel = ctx.bases.relative;
    const Vector one = Vector::Constant(1, Scalar(1));
    REQUIRE(rel.module.dim(3) == 2);
    const Poly v = ctx.pair(0, one, 3, Vector::Unit(2, 0));
    CHECK(v.degree() == 1);
  }
  SECTION("Poincare duality against the toric h-vector") {
    for (auto fan : {cube_faces(), octants(), sqrt5_fan()}) {
      const PairingReport r = ih_pairing(fan, {});
      CHECK(nonzero_dims(r.ih_dims) == as_index(toric_h(*fan)));
      CHECK(r.all_nondegenerate());
    }
    // <square cone>: IH is the local g-polynomial, the relative part its mirror
    auto fan = square_cone();
    const PairingReport r = ih_pairing(fan, {});
    CHECK(nonzero_dims(r.ih_dims) == as_index(toric_g(*fan)[static_cast<std::size_t>(fan->maximal_cones().front())]));
    CHECK(r.relative_dims == std::vector<Index>{0, 0, 1, 1});
    CHECK(r.all_nondegenerate());
    CHECK(ih_pairing(cube_faces(), {}).ih_dims == std::vector<Index>{1, 5, 5, 1});
    CHECK(ih_pairing(sqrt5_fan(), {}).ih_dims == std::vector<Index>{1, 3, 1});
  }
  SECTION("omega scaling") {
    const PairingReport a = ih_pairing(cube_faces(), {});
    const PairingReport b = ih_pairing(cube_faces(), {Scalar(3)});
    for (std::size_t p = 0; p < a.matrices.size(); ++p) CHECK(b.matrices[p] * Scalar(3) == a.matrices[p]);
  }
}

TEST_CASE("pairing through a simplicial refinement") {
  SECTION("simplicial fans: the product of functions") {
    auto fan = four_quadrants();
    const PairingContext ctx = pairing_context(fan, {});
    const PairingReport r = pairing_via_refinement(fan, {});
    CHECK(r.all_nondegenerate());
    // <1, b> = e(1 * b) for the top class b
    const Matrix one = ctx.bases.global.values_at(ctx.bases.e, 0, 0) * ctx.bases.ih.lifts[0];
    const Matrix b = ctx.bases.ih_relative.lifts[2];
    std::vector<Poly> f;
    for (int sigma : fan->maximal_cones()) {
      const Vector v = ctx.bases.relative.values_at(ctx.bases.e, sigma, 2) * b;
      f.push_back(Poly::from_coords(2, 2, v) * one(0, 0));
    }
    CHECK(r.matrices[0](0, 0) == constant_term_of(evaluation_map(*fan, {}, f)));
  }
  SECTION("the two routes differ by the orientation sign") {
    for (auto fan : {line_fan(), quadrant(), four_quadrants(), octants(), square_cone(), cube_faces()}) {
      const int n = static_cast<int>(fan->ambient_dim());
      const PairingReport di = ih_pairing(fan, {});
      const PairingReport rf = pairing_via_refinement(fan, {});
      REQUIRE(di.matrices.size() == rf.matrices.size());
      for (std::size_t p = 0; p < di.matrices.size(); ++p) {
        CHECK(di.matrices[p] == rf.matrices[p] * Scalar(route_sign(n)));
      }
      CHECK(rf.all_nondegenerate());
    }
  }
  SECTION("square cone: the degree-1 generator") {
    const PairingReport rf = pairing_via_refinement(square_cone(), {});
    CHECK(rf.matrices[1].size() == 1);
    CHECK_FALSE(rf.matrices[1](0, 0).is_zero());
  }
}

TEST_CASE("vanishing bounds") {
  for (auto fan : {quadrant(), square_cone(), cube_faces(), four_quadrants(), line_fan()}) {
    CHECK(check_vanishing(minimal_extension(fan, static_cast<int>(fan->ambient_dim()) + 1)));
  }
  auto fan = square_cone();
  const FanSheaf e = minimal_extension(fan, 4);
  const int sigma = fan->maximal_cones().front();
  CHECK(reduction_mod_m(e.stalk(sigma)).dims() == std::vector<Index>{1, 1, 0, 0, 0});
  const Sections rel = relative_stalk(e, sigma);
  CHECK(rel.module.dim(1) == 0);
  CHECK(rel.module.dim(2) > 0);

  // the pushforward of the structure sheaf has a reduced generator in degree 2 at sigma
  const Refinement r = stellar_subdivide(fan, vec({0, 0, 1}));
  const VanishingReport bad = check_vanishing(pushforward(r.map, structure_sheaf(r.fan, 3)).sheaf);
  CHECK_FALSE(bad);
  CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("strictly convex functions") {
  auto fan = four_quadrants();
  const std::vector<Vector> square{vec({1, 1}), vec({-1, 1}), vec({-1, -1}), vec({1, -1})};
  const ConvexFunction psi = support_function(*fan, square);
  CHECK(psi.walls.size() == 8);
  for (const auto& w : psi.walls) CHECK(w.gap.sign() > 0);

  std::map<int, Vector> concave;
  for (const auto& [c, l] : psi.forms) concave[c] = -l;
  CHECK_THROWS_AS(convex_function(*fan, concave), NotStrictlyConvex);
  std::map<int, Vector> broken = psi.forms;
  broken.begin()->second(0) += Scalar(1);
  CHECK_THROWS_AS(convex_function(*fan, broken), NotStrictlyConvex);
  CHECK_THROWS_AS(support_function(*fan, {vec({1, 0}), vec({0, 1}), vec({-1, -1})}), NotStrictlyConvex);
  CHECK_THROWS_AS(strictly_convex_function(*quadrant()), NotComplete);

  for (auto f : {cube_faces(), octants(), sqrt5_fan(), line_fan()}) CHECK_FALSE(strictly_convex_function(*f).walls.empty());
}

TEST_CASE("hard Lefschetz") {
  SECTION("four quadrants with the support function of the square") {
    auto fan = four_quadrants();
    const PairingContext ctx = pairing_context(fan, {});
    const std::vector<Vector> square{vec({1, 1}), vec({-1, 1}), vec({-1, -1}), vec({1, -1})};
    const LefschetzReport rep = hard_lefschetz_check(ctx, support_function(*fan, square));
    CHECK(rep.passed());
    REQUIRE(rep.matrices.size() == 2);
    CHECK(rep.matrices[0].size() == 1);
    CHECK_FALSE(rep.matrices[0](0, 0).is_zero());
    CHECK(rep.matrices[1].rows() == 2);
  }
  SECTION("complete corpus fans") {
    for (auto fan : {cube_faces(), octants(), sqrt5_fan(), line_fan()}) {
      const PairingContext ctx = pairing_context(fan, {});
      const LefschetzReport rep = hard_lefschetz_check(ctx, strictly_convex_function(*fan));
      CHECK(rep.passed());
      CHECK(rep.witness.empty());
    }
    CHECK_THROWS_AS(hard_lefschetz_check(pairing_context(quadrant(), {}), ConvexFunction{}), NotComplete);
  }
  SECTION("Hodge-Riemann signs carry the orientation sign of the pairing") {
    for (auto fan : {line_fan(), four_quadrants(), cube_faces()}) {
      const int n = static_cast<int>(fan->ambient_dim());
      const PairingContext ctx = pairing_context(fan, {});
      const LefschetzReport rep = hard_lefschetz_check(ctx, strictly_convex_function(*fan), true);
      for (bool ok : rep.hodge_riemann) CHECK(ok == (route_sign(n) > 0));
    }
  }
}
