#include "catch_amalgamated.hpp"

#include "fanih/fan.hpp"
#include "fixtures.hpp"

#include <algorithm>
#include <memory>

using namespace fanih;

using namespace fixtures;

namespace {

// Brute-force facets of a full-dimensional cone: every (n-1)-subset of the
// generators spanning a hyperplane with all generators on one side.
std::vector<Vector> brute_force_facets(const std::vector<Vector>& gens) {
  const Index n = gens.front().size();
  const std::size_t k = gens.size();
  std::vector<Vector> out;
  std::vector<int> pick(k, 0);
  std::fill(pick.begin(), pick.begin() + (n - 1), 1);
  do {
    Matrix m(n - 1, n);
    Index row = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (pick[i]) m.row(row++) = gens[i].transpose();
    }
    const Matrix ker = kernel<Scalar>(m);
    if (ker.cols() != 1) continue;
    Vector h = ker.col(0);
    int sign = 0;
    bool ok = true;
    for (const Vector& g : gens) {
      const int s = h.dot(g).sign();
      if (s == 0) continue;
      if (sign == 0) sign = s;
      if (s != sign) ok = false;
    }
    if (!ok || sign == 0) continue;
    if (sign < 0) h = -h;
    h = normalize_ray(h);
    if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

}  // namespace

TEST_CASE("double description matches brute force facets") {
  const std::vector<std::vector<Vector>> inputs = {
      {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})},
      {vec({1, 1, 1}), vec({1, -1, 1}), vec({-1, 1, 1}), vec({-1, -1, 1})},
      {vec({1, 0, 1}), vec({0, 1, 1}), vec({-1, 0, 1}), vec({0, -1, 1}), vec({1, 1, 2})},
      {vec({2, 1, 1}), vec({1, 3, 1}), vec({0, 0, 1}), vec({1, 1, 4}), vec({3, 0, 2})},
  };
  for (const auto& gens : inputs) {
    const Cone c = build_cone(gens);
    auto expect = brute_force_facets(gens);
    std::vector<Vector> got;
    for (Index i = 0; i < c.facet_forms.rows(); ++i) got.push_back(normalize_ray(c.facet_forms.row(i).transpose()));
    REQUIRE(got.size() == expect.size());
    for (const Vector& h : expect) CHECK(std::find(got.begin(), got.end(), h) != got.end());
  }
}

TEST_CASE("cone construction") {
  const Cone q = cone_of({{1, 0}, {0, 1}, {1, 1}});
  CHECK(q.dim == 2);
  CHECK(q.rays.size() == 2);
  CHECK(q.non_extreme.size() == 1);
  CHECK(q.contains(vec({3, 1})));
  CHECK_FALSE(q.contains(vec({-1, 1})));
  CHECK_THROWS_AS(build_cone({}), EmptyInput);
  CHECK_THROWS_AS(cone_of({{1, 0}, {-1, 0}}), NotStrictlyConvex);
  CHECK_THROWS_AS(cone_of({{1, 0}, {0, 1}, {-1, -1}}), NotStrictlyConvex);
  const Cone ray = cone_of({{1, 2, 3}});
  CHECK(ray.dim == 1);
  CHECK(ray.contains(vec({2, 4, 6})));
  CHECK_FALSE(ray.contains(vec({-1, -2, -3})));
}

TEST_CASE("quadrant fans and face structure") {
  const auto f = four_quadrants();
  CHECK(f->size() == 9);
  CHECK(f->cones_of_dim(1).size() == 4);
  CHECK(f->is_complete());
  CHECK(f->is_simplicial());
  CHECK(boundary_fan(*f).size() == 0);
  const auto q = make({cone_of({{1, 0}, {0, 1}})});
  CHECK_FALSE(q->is_complete());
  CHECK(boundary_fan(*q).size() == 3);
  CHECK(is_quasi_convex(*q));
  CHECK(is_quasi_convex(*f));
}

TEST_CASE("overlapping cones are rejected") {
  CHECK_THROWS_AS(assemble_fan({cone_of({{1, 0}, {0, 1}}), cone_of({{1, 1}, {-1, 1}})}), NotAFan);
  CHECK_THROWS_AS(assemble_fan({cone_of({{1, 0}, {0, 1}}), cone_of({{1, 0}, {1, 1}})}), NotAFan);
  CHECK_NOTHROW(assemble_fan({cone_of({{1, 0}, {0, 1}}), cone_of({{0, 1}, {-1, 0}})}));
}

TEST_CASE("quasi-convexity") {
  const auto opposite = make({cone_of({{1, 0}, {0, 1}}), cone_of({{-1, 0}, {0, -1}})});
  const auto qc = is_quasi_convex(*opposite);
  CHECK_FALSE(qc);
  CHECK_FALSE(qc.reason.empty());
  const auto three = make({cone_of({{1, 0}, {0, 1}}), cone_of({{0, 1}, {-1, 0}}), cone_of({{-1, 0}, {0, -1}})});
  CHECK(is_quasi_convex(*three));
  const auto square = make({cone_of({{1, 1, 1}, {1, -1, 1}, {-1, 1, 1}, {-1, -1, 1}})});
  CHECK(is_quasi_convex(*square));
  CHECK(is_quasi_convex(*cube_faces()));
  const auto two_octants = make({cone_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), cone_of({{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}})});
  CHECK_FALSE(is_quasi_convex(*two_octants));
}

TEST_CASE("order complex homology") {
  // boundary of a triangle: 3 vertices, 3 edges
  std::vector<std::vector<bool>> less(6, std::vector<bool>(6, false));
  for (int e = 0; e < 3; ++e) {
    less[static_cast<std::size_t>(e)][static_cast<std::size_t>(3 + e)] = true;
    less[static_cast<std::size_t>((e + 1) % 3)][static_cast<std::size_t>(3 + e)] = true;
  }
  const auto b = reduced_betti_of_order_complex(less);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == 0);
  CHECK(b[1] == 0);
  CHECK(b[2] == 1);
}

TEST_CASE("cube face fan") {
  const auto f = cube_faces();
  CHECK(f->rays().size() == 8);
  CHECK(f->cones_of_dim(3).size() == 6);
  CHECK(f->cones_of_dim(2).size() == 12);
  CHECK(f->is_complete());
  CHECK_FALSE(f->is_simplicial());
  const auto s = simplicialize(f);
  CHECK(s.fan->is_simplicial());
  CHECK(s.fan->is_complete());
  CHECK(s.fan->rays().size() == 8 + 6);
  CHECK(s.fan->cones_of_dim(3).size() == 24);
  for (const auto& c : s.fan->cones()) {
    const int t = s.map.assignment[static_cast<std::size_t>(c.id)];
    REQUIRE(t >= 0);
    CHECK(f->cone(t).dim() >= c.dim());
  }
}

TEST_CASE("stellar subdivision") {
  const auto q = make({cone_of({{1, 0}, {0, 1}})});
  const auto s = stellar_subdivide(q, vec({1, 1}));
  CHECK(s.fan->cones_of_dim(2).size() == 2);
  CHECK(s.fan->rays().size() == 3);
  CHECK_THROWS_AS(stellar_subdivide(q, vec({-1, 1})), RayOutsideSupport);
  const auto oct = octants();
  const auto s3 = stellar_subdivide(oct, vec({1, 1, 0}));
  CHECK(s3.fan->cones_of_dim(3).size() == 10);
  CHECK(s3.fan->is_complete());
}

TEST_CASE("stars and transversal fans") {
  const auto oct = octants();
  const int ray = oct->find({0});
  REQUIRE(ray >= 0);
  CHECK(open_star(*oct, ray).size() == 1 + 4 + 4);
  const auto t = transversal_fan(oct, ray);
  CHECK(t.fan->ambient_dim() == 2);
  CHECK(t.fan->cones_of_dim(2).size() == 4);
  CHECK(t.fan->is_complete());
  CHECK_THROWS_AS(star(*oct, 999), ConeNotInFan);
  const auto top = oct->cones_of_dim(3).front();
  const auto t3 = transversal_fan(oct, top);
  CHECK(t3.fan->ambient_dim() == 0);
  CHECK(t3.fan->size() == 1);
}

TEST_CASE("orientation signs satisfy the product rule") {
  for (const auto& f : {octants(), cube_faces(), four_quadrants()}) {
    const OrientationData o = orient_cones(*f);
    for (const auto& c : f->cones()) {
      if (c.dim() < 2) continue;
      // for every codimension-2 face eta, the two chains through eta cancel
      for (int eta : f->faces(c.id)) {
        if (f->cone(eta).dim() != c.dim() - 2) continue;
        int total = 0;
        int count = 0;
        for (int tau : c.facets) {
          if (!f->is_face(eta, tau)) continue;
          total += o.sign(c.id, tau) * o.sign(tau, eta);
          ++count;
        }
        CHECK(count == 2);
        CHECK(total == 0);
      }
    }
    for (int r : f->cones_of_dim(1)) CHECK(o.sign(r, 0) == 1);
  }
}

TEST_CASE("quadratic field fan") {
  Vector r(2);
  r << Scalar(1), Scalar::sqrt(5);
  const Cone c = build_cone({vec({1, 0}), r});
  CHECK(c.contains((Vector(2) << Scalar(1), Scalar(2)).finished()));
  CHECK_FALSE(c.contains((Vector(2) << Scalar(1), Scalar(3)).finished()));
}
