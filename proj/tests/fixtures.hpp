#pragma once

// Small fans shared by the test programs.

#include "fanih/fan.hpp"

#include <algorithm>
#include <initializer_list>
#include <memory>
#include <vector>

namespace fixtures {

using namespace fanih;

inline Vector vec(std::initializer_list<int> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (int x : xs) v(i++) = Scalar(x);
  return v;
}

inline Cone cone_of(std::initializer_list<std::initializer_list<int>> gens) {
  std::vector<Vector> g;
  for (auto x : gens) g.push_back(vec(x));
  return build_cone(g);
}

inline std::shared_ptr<const Fan> make(std::vector<Cone> cones) {
  return std::make_shared<const Fan>(assemble_fan(cones));
}

inline std::shared_ptr<const Fan> line_fan() { return make({cone_of({{1}}), cone_of({{-1}})}); }

/// <quadrant>: the positive quadrant with its faces.
inline std::shared_ptr<const Fan> quadrant() { return make({cone_of({{1, 0}, {0, 1}})}); }

inline std::shared_ptr<const Fan> four_quadrants() {
  return make({cone_of({{1, 0}, {0, 1}}), cone_of({{0, 1}, {-1, 0}}), cone_of({{-1, 0}, {0, -1}}),
               cone_of({{0, -1}, {1, 0}})});
}

inline std::shared_ptr<const Fan> opposite_quadrants() {
  return make({cone_of({{1, 0}, {0, 1}}), cone_of({{-1, 0}, {0, -1}})});
}

inline std::shared_ptr<const Fan> octants() {
  std::vector<Cone> cones;
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int c : {1, -1}) cones.push_back(cone_of({{a, 0, 0}, {0, b, 0}, {0, 0, c}}));
  return make(cones);
}

/// Cone over a square: rays (+-1, +-1, 1).
inline std::shared_ptr<const Fan> square_cone() {
  return make({cone_of({{1, 1, 1}, {1, -1, 1}, {-1, -1, 1}, {-1, 1, 1}})});
}

/// Complete fan over Q(sqrt 5) with rays (1,0), (1,sqrt 5), (0,1), (-1,0), (0,-1).
inline std::shared_ptr<const Fan> sqrt5_fan() {
  Vector r(2);
  r << Scalar(1), Scalar::sqrt(5);
  const std::vector<Vector> rays{vec({1, 0}), r, vec({0, 1}), vec({-1, 0}), vec({0, -1})};
  std::vector<Cone> cones;
  for (std::size_t i = 0; i < rays.size(); ++i) cones.push_back(build_cone({rays[i], rays[(i + 1) % rays.size()]}));
  return std::make_shared<const Fan>(assemble_fan(cones, Field::quadratic(5)));
}

/// Cones over the faces of the cube [-1,1]^3.
inline std::shared_ptr<const Fan> cube_faces() {
  std::vector<Cone> cones;
  for (int axis = 0; axis < 3; ++axis) {
    for (int s : {1, -1}) {
      std::vector<Vector> gens;
      for (int a : {1, -1}) {
        for (int b : {1, -1}) {
          Vector v(3);
          v(axis) = s;
          v((axis + 1) % 3) = a;
          v((axis + 2) % 3) = b;
          gens.push_back(v);
        }
      }
      cones.push_back(build_cone(gens));
    }
  }
  return make(cones);
}

inline int cone_with_rays(const Fan& f, std::initializer_list<std::initializer_list<int>> rays) {
  std::vector<int> ids;
  for (auto r : rays) {
    const Vector v = normalize_ray(vec(r));
    for (std::size_t i = 0; i < f.rays().size(); ++i) {
      if (f.rays()[i] == v) ids.push_back(static_cast<int>(i));
    }
  }
  std::sort(ids.begin(), ids.end());
  return f.find(ids);
}

using IntPoly = std::vector<long>;  // coefficients in t, lowest first

inline IntPoly times_t_minus_1(const IntPoly& p, int e) {
  IntPoly out = p;
  for (int i = 0; i < e; ++i) {
    IntPoly next(out.size() + 1, 0);
    for (std::size_t j = 0; j < out.size(); ++j) {
      next[j + 1] += out[j];
      next[j] -= out[j];
    }
    out = next;
  }
  return out;
}

inline void add_to(IntPoly& acc, const IntPoly& p) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += p[i];
}

inline IntPoly trim(IntPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

/// Toric g-polynomials of all cones by the g/h recursion on the face poset,
/// using only the combinatorics of the fan.
inline std::vector<IntPoly> toric_g(const Fan& f) {
  std::vector<IntPoly> g(static_cast<std::size_t>(f.size()));
  for (int c = 0; c < f.size(); ++c) {
    const int s = static_cast<int>(f.cone(c).dim());
    if (s == 0) {
      g[0] = {1};
      continue;
    }
    IntPoly h;
    for (int t : f.faces(c)) {
      if (t == c) continue;
      add_to(h, times_t_minus_1(g[static_cast<std::size_t>(t)], s - 1 - static_cast<int>(f.cone(t).dim())));
    }
    h.resize(static_cast<std::size_t>(s), 0);
    IntPoly out{h[0]};
    for (int i = 1; i <= (s - 1) / 2; ++i) out.push_back(h[static_cast<std::size_t>(i)] - h[static_cast<std::size_t>(i - 1)]);
    g[static_cast<std::size_t>(c)] = trim(out);
  }
  return g;
}

/// Toric h-vector of a complete fan.
inline IntPoly toric_h(const Fan& f) {
  const auto g = toric_g(f);
  const int n = static_cast<int>(f.ambient_dim());
  IntPoly h;
  for (int c = 0; c < f.size(); ++c) add_to(h, times_t_minus_1(g[static_cast<std::size_t>(c)], n - static_cast<int>(f.cone(c).dim())));
  return trim(h);
}

/// Hilbert function of the face ring of a simplicial fan: piecewise
/// polynomials of degree k count as sum over cones of C(k-1, dim-1).
inline long face_ring_dim(const Fan& f, int k) {
  if (k == 0) return 1;
  long total = 0;
  for (int c = 1; c < f.size(); ++c) {
    const long d = static_cast<long>(f.cone(c).dim());
    if (k < d) continue;
    long binom = 1;
    for (long i = 0; i < d - 1; ++i) binom = binom * (k - 1 - i) / (i + 1);
    total += binom;
  }
  return total;
}

}  // namespace fixtures
