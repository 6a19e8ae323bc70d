#include "fanih/pairing.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace fanih {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

Matrix ray_matrix(const Fan& fan, int sigma) {
  const FanCone& c = fan.cone(sigma);
  Matrix r(fan.ambient_dim(), static_cast<Index>(c.rays.size()));
  for (std::size_t j = 0; j < c.rays.size(); ++j) r.col(static_cast<Index>(j)) = fan.rays()[at(c.rays[j])];
  return r;
}

Scalar constant_term(const Poly& p) { return p.coefficient(Exponent(static_cast<std::size_t>(p.nvars()), 0)); }

/// Localization data of a simplicial fan: the distinct hyperplanes of all
/// n-cones and, per cone, the product of the hyperplanes it does not use.
class Evaluator {
 public:
  Evaluator(const Fan& fan, const VolumeForm& omega) : fan_(fan), n_(static_cast<int>(fan.ambient_dim())) {
    if (!fan.is_simplicial()) throw NotSimplicial("evaluation needs a simplicial fan");
    const Subfan boundary = fan.is_complete() ? Subfan{} : boundary_fan(fan);
    for (int sigma : fan.maximal_cones()) {
      if (fan.cone(sigma).dim() != n_) throw NotSimplicial("fan is not purely n-dimensional");
      const Matrix r = ray_matrix(fan, sigma);
      const Matrix dual = fanih::inverse<Scalar>(r);
      Local loc;
      loc.cone = sigma;
      loc.scale = fanih::determinant<Scalar>(r).abs() * omega.lambda;
      for (Index i = 0; i < n_; ++i) {
        Vector h = dual.row(i).transpose();
        Index lead = 0;
        while (h(lead).is_zero()) ++lead;
        loc.scale *= h(lead);
        h /= h(lead);
        loc.planes.push_back(plane_id(h));
        // the facet opposite ray i
        std::vector<int> rest;
        for (Index j = 0; j < n_; ++j) {
          if (j != i) rest.push_back(fan.cone(sigma).rays[at(static_cast<int>(j))]);
        }
        std::sort(rest.begin(), rest.end());
        const int tau = fan.find(rest);
        if (std::binary_search(boundary.begin(), boundary.end(), tau)) loc.boundary.push_back(dual.row(i).transpose());
      }
      locals_.push_back(std::move(loc));
    }
    for (auto& loc : locals_) {
      Poly c = Poly::constant(n_, Scalar(1));
      for (std::size_t j = 0; j < planes_.size(); ++j) {
        if (std::find(loc.planes.begin(), loc.planes.end(), static_cast<int>(j)) == loc.planes.end()) {
          c = c * Poly::linear(planes_[j]);
        }
      }
      loc.cofactor = c * loc.scale.inverse();
    }
  }

  Poly operator()(const std::vector<Poly>& f) const {
    if (f.size() != locals_.size()) throw std::invalid_argument("one polynomial per maximal cone expected");
    Poly sum(n_);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Local& loc = locals_[i];
      for (const Vector& h : loc.boundary) {
        if (!f[i].is_zero() && !f[i].divide_linear(h)) {
          throw BoundarySupport("section does not vanish on the boundary at " + fan_.describe(loc.cone));
        }
      }
      if (!f[i].is_zero()) sum += f[i] * loc.cofactor;
    }
    for (const Vector& h : planes_) {
      if (sum.is_zero()) break;
      auto q = sum.divide_linear(h);
      if (!q) throw DenominatorNotCleared("localization sum is not a polynomial");
      sum = std::move(*q);
    }
    return sum;
  }

 private:
  struct Local {
    int cone = 0;
    Scalar scale;
    std::vector<int> planes;
    std::vector<Vector> boundary;
    Poly cofactor;
  };

  int plane_id(const Vector& h) {
    for (std::size_t j = 0; j < planes_.size(); ++j) {
      if (planes_[j] == h) return static_cast<int>(j);
    }
    planes_.push_back(h);
    return static_cast<int>(planes_.size() - 1);
  }

  const Fan& fan_;
  int n_;
  std::vector<Vector> planes_;
  std::vector<Local> locals_;
};

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix out = Matrix::Zero(r, c);
  r = 0;
  c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

bool invertible(const Matrix& m) { return m.rows() == m.cols() && fanih::rank<Scalar>(m) == m.rows(); }

Matrix lifts_at(const Reduction& r, int k) {
  return r.dim(k) == 0 ? Matrix(0, 0) : r.lifts[at(k - r.lo)];
}

}  // namespace

Poly evaluation_map(const Fan& fan, const VolumeForm& omega, const std::vector<Poly>& f) {
  return Evaluator(fan, omega)(f);
}

DualityIsomorphism duality_isomorphism(const FanSheaf& e) {
  DualityIsomorphism di;
  di.dual = dual_sheaf(e);
  const MorphismSpace ms = sheaf_morphisms(e, di.dual.sheaf);
  di.solution_dimension = ms.basis.cols();
  if (di.solution_dimension != 1) {
    throw SolutionSpaceNotOneDimensional("morphisms E -> DE form a space of dimension " +
                                         std::to_string(di.solution_dimension));
  }
  Vector column = ms.basis.col(0);
  const FreeMorphism raw = ms.morphism(column, e, di.dual.sheaf);
  const Vector& at_o = raw.images.at(0).at(0);
  if (at_o.size() != 1 || at_o(0).is_zero()) throw std::logic_error("E -> DE vanishes at the zero cone");
  column /= at_o(0);
  di.map = ms.morphism(column, e, di.dual.sheaf);
  return di;
}

Index rigidity_check(const FanSheaf& e) { return sheaf_morphisms(e, e).basis.cols(); }

namespace {

IHBases bases_of(FanSheaf e) {
  const Fan& fan = *e.fan;
  IHBases b;
  const RingMap ring = ambient_ring(fan);
  b.global = sections_over(e, fan.all(), ring);
  b.relative = relative_sections(e, fan.all(), fan.is_complete() ? Subfan{} : boundary_fan(fan), ring);
  b.ih = reduction_mod_m(b.global.module);
  b.ih_relative = reduction_mod_m(b.relative.module);
  b.e = std::move(e);
  return b;
}

int default_hi(const Fan& fan, int hi) {
  const int n = static_cast<int>(fan.ambient_dim());
  return hi < 0 ? n + 1 : std::max(hi, n + 1);
}

PairingReport report_from(int n, const IHBases& b, const std::function<Matrix(int, const Matrix&, const Matrix&)>& pair) {
  PairingReport r;
  r.n = n;
  for (int p = 0; p <= n; ++p) {
    r.ih_dims.push_back(b.ih.dim(p));
    r.relative_dims.push_back(b.ih_relative.dim(p));
  }
  for (int p = 0; p <= n; ++p) {
    const Index rows = b.ih.dim(p);
    const Index cols = b.ih_relative.dim(n - p);
    Matrix m = rows == 0 || cols == 0 ? Matrix(rows, cols) : pair(p, lifts_at(b.ih, p), lifts_at(b.ih_relative, n - p));
    r.nondegenerate.push_back(invertible(m));
    r.matrices.push_back(std::move(m));
  }
  return r;
}

}  // namespace

IHBases ih_bases(std::shared_ptr<const Fan> fan, int hi) {
  return bases_of(minimal_extension(fan, default_hi(*fan, hi)));
}

std::vector<Vector> components(const Sections& s, int k, const Vector& coords) {
  std::vector<Vector> out;
  if (s.module.dim(k) == 0) return out;
  const Vector tuple = mul<Scalar>(s.space(k).basis(), coords);
  const auto& off = s.offsets[at(k - s.lo)];
  for (std::size_t i = 0; i < s.maximal.size(); ++i) {
    const Index end = i + 1 < off.size() ? off[i + 1] : tuple.size();
    out.push_back(tuple.segment(off[i], end - off[i]));
  }
  return out;
}

PairingContext pairing_context(std::shared_ptr<const Fan> fan, const VolumeForm& omega, int hi) {
  PairingContext ctx;
  ctx.fan = fan;
  ctx.omega = omega;
  ctx.bases = ih_bases(fan, hi);
  ctx.di = duality_isomorphism(ctx.bases.e);
  ctx.global = global_dual_iso(ctx.bases.e, ctx.di.dual);
  if (!ctx.global.bijective) throw ComparisonNotBijective("global dual comparison is not bijective");
  return ctx;
}

namespace {

/// Hom coordinates of the functional DI(a), a in E_Delta^p.
std::optional<Vector> dual_functional(const PairingContext& ctx, int p, const Vector& a) {
  const int n = static_cast<int>(ctx.fan->ambient_dim());
  const GlobalDualIso& g = ctx.global;
  if (g.hom.module.dim(p - n) == 0) return std::nullopt;
  const auto comps = components(ctx.bases.global, p, a);
  std::vector<Matrix> images;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const int sigma = ctx.bases.global.maximal[i];
    images.push_back(mul<Scalar>(ctx.di.map.block(ctx.bases.e, ctx.di.dual.sheaf, sigma, p), comps[i]));
  }
  const Vector tuple = vstack<Scalar>(images, 1).col(0);
  const auto c = g.dual_sections.coords(p, tuple);
  if (!c) throw std::logic_error("DI(a) is not a global section of DE");
  const auto psi = solve<Scalar>(g.matrix(p), *c);
  if (!psi) throw ComparisonNotBijective("DI(a) has no preimage in Hom");
  return psi;
}

}  // namespace

Poly PairingContext::pair(int p, const Vector& a, int q, const Vector& b) const {
  const int n = static_cast<int>(fan->ambient_dim());
  const int deg = p + q - n;
  Poly zero(n);
  if (deg < 0 || bases.global.module.dim(p) == 0 || global.relative.module.dim(q) == 0) return zero;
  const auto psi = dual_functional(*this, p, a);
  if (!psi) return zero;
  const Matrix f = global.hom.apply(global.ring, p - n, *psi, q);
  return Poly::from_coords(n, deg, mul<Scalar>(f, b)) * omega.lambda.inverse();
}

Matrix PairingContext::pair_matrix(int p, const Matrix& a, int q, const Matrix& b) const {
  const int n = static_cast<int>(fan->ambient_dim());
  Matrix out = Matrix::Zero(a.cols(), b.cols());
  for (Index i = 0; i < a.cols(); ++i) {
    const auto psi = dual_functional(*this, p, a.col(i));
    if (!psi) continue;
    const Matrix f = global.hom.apply(global.ring, p - n, *psi, q);
    out.row(i) = mul<Scalar>(f, b).row(0) * omega.lambda.inverse();
  }
  return out;
}

bool PairingReport::all_nondegenerate() const {
  return std::all_of(nondegenerate.begin(), nondegenerate.end(), [](bool b) { return b; });
}

PairingReport ih_pairing(const PairingContext& ctx) {
  const int n = static_cast<int>(ctx.fan->ambient_dim());
  return report_from(n, ctx.bases, [&](int p, const Matrix& a, const Matrix& b) { return ctx.pair_matrix(p, a, n - p, b); });
}

PairingReport ih_pairing(std::shared_ptr<const Fan> fan, const VolumeForm& omega, int hi) {
  return ih_pairing(pairing_context(std::move(fan), omega, hi));
}

PairingReport pairing_via_refinement(std::shared_ptr<const Fan> fan, const VolumeForm& omega, int hi) {
  const int n = static_cast<int>(fan->ambient_dim());
  hi = default_hi(*fan, hi);
  if (!is_quasi_convex(*fan)) throw NotQuasiConvex("fan is not quasi-convex: " + is_quasi_convex(*fan).reason);
  const Refinement r = simplicialize(fan);
  const FanSheaf a = structure_sheaf(r.fan, hi);
  const Pushforward push = pushforward(r.map, a);
  Decomposition dec = decompose(push.sheaf);
  const Summand* e_summand = nullptr;
  for (const auto& s : dec.summands) {
    if (s.cone == 0) {
      if (e_summand) throw std::logic_error("E occurs twice in the pushforward");
      e_summand = &s;
    }
  }
  if (!e_summand || e_summand->degree != 0) throw std::logic_error("E is not a summand of the pushforward in degree 0");
  const IHBases b = bases_of(dec.simple.at(0));
  const FreeMorphism& iota = e_summand->embedding;

  // iota(1) is a constant function; its value normalizes 1 -> 1
  const Matrix one = mul<Scalar>(push.sections[0].values_at(a, 0, 0), iota.block(b.e, push.sheaf, 0, 0));
  if (one.rows() != 1 || one.cols() != 1 || one(0, 0).is_zero()) throw std::logic_error("embedding of E vanishes at o");
  const Scalar norm = (one(0, 0) * one(0, 0)).inverse();

  const Evaluator eval(*r.fan, omega);
  const std::vector<int> fine = r.fan->maximal_cones();
  const auto piecewise = [&](const Sections& s, int k, const Vector& coords) {
    std::map<int, Poly> values;
    const auto comps = components(s, k, coords);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const int sigma = s.maximal[i];
      const Sections& ps = push.sections[at(sigma)];
      if (ps.module.dim(k) == 0) continue;
      const Vector v = mul<Scalar>(iota.block(b.e, push.sheaf, sigma, k), comps[i]);
      for (int m : ps.maximal) values[m] = Poly::from_coords(n, k, mul<Scalar>(ps.values_at(a, m, k), v));
    }
    return values;
  };
  return report_from(n, b, [&](int p, const Matrix& lifts, const Matrix& rel) {
    std::vector<std::map<int, Poly>> right;
    for (Index j = 0; j < rel.cols(); ++j) right.push_back(piecewise(b.relative, n - p, rel.col(j)));
    Matrix out(lifts.cols(), rel.cols());
    for (Index i = 0; i < lifts.cols(); ++i) {
      const auto left = piecewise(b.global, p, lifts.col(i));
      for (Index j = 0; j < rel.cols(); ++j) {
        std::vector<Poly> prod;
        for (int m : fine) {
          const auto x = left.find(m);
          const auto y = right[at(static_cast<int>(j))].find(m);
          prod.push_back(x == left.end() || y == right[at(static_cast<int>(j))].end() ? Poly(n) : x->second * y->second);
        }
        out(i, j) = constant_term(eval(prod)) * norm;
      }
    }
    return out;
  });
}

VanishingReport check_vanishing(const FanSheaf& e) {
  const Fan& fan = *e.fan;
  VanishingReport rep;
  for (int sigma = 1; sigma < fan.size(); ++sigma) {
    const int s = static_cast<int>(fan.cone(sigma).dim());
    const Reduction red = reduction_mod_m(e.stalk(sigma));
    for (int k = e.lo; k <= e.hi; ++k) {
      if (2 * k >= s && red.dim(k) != 0) {
        rep.witness = "reduced stalk at " + fan.describe(sigma) + " is nonzero in degree " + std::to_string(2 * k);
        return rep;
      }
    }
    const Sections rel = relative_stalk(e, sigma);
    for (int k = e.lo; 2 * k <= s && k <= e.hi; ++k) {
      if (rel.module.dim(k) != 0) {
        rep.witness = "relative stalk at " + fan.describe(sigma) + " is nonzero in degree " + std::to_string(2 * k);
        return rep;
      }
    }
  }
  rep.holds = true;
  return rep;
}

ConvexFunction convex_function(const Fan& fan, std::map<int, Vector> forms) {
  const Index n = fan.ambient_dim();
  for (int sigma : fan.maximal_cones()) {
    const auto it = forms.find(sigma);
    if (it == forms.end() || it->second.size() != n) throw NotStrictlyConvex("no linear form on " + fan.describe(sigma));
  }
  ConvexFunction psi;
  for (int tau : fan.cones_of_dim(n - 1)) {
    const auto& cof = fan.cone(tau).cofacets;
    if (cof.size() != 2) continue;
    for (int side = 0; side < 2; ++side) {
      const int below = cof[at(side)];
      const int across = cof[at(1 - side)];
      const Vector& l = forms.at(below);
      const Vector& m = forms.at(across);
      for (int ray : fan.cone(tau).rays) {
        const Vector& v = fan.rays()[at(ray)];
        if (l.dot(v) != m.dot(v)) throw NotStrictlyConvex("linear forms disagree on " + fan.describe(tau));
      }
      int off = -1;
      for (int ray : fan.cone(across).rays) {
        if (!std::binary_search(fan.cone(tau).rays.begin(), fan.cone(tau).rays.end(), ray)) off = ray;
      }
      const Vector& v = fan.rays()[at(off)];
      const Scalar gap = m.dot(v) - l.dot(v);
      if (gap.sign() <= 0) throw NotStrictlyConvex("not strictly convex across " + fan.describe(tau));
      psi.walls.push_back({tau, below, across, gap});
    }
  }
  psi.forms = std::move(forms);
  return psi;
}

ConvexFunction support_function(const Fan& fan, const std::vector<Vector>& vertices) {
  if (vertices.empty()) throw NotStrictlyConvex("polytope without vertices");
  std::map<int, Vector> forms;
  for (int sigma : fan.maximal_cones()) {
    Vector w = Vector::Zero(fan.ambient_dim());
    for (int ray : fan.cone(sigma).rays) w += fan.rays()[at(ray)];
    int best = -1;
    bool unique = true;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (best < 0) {
        best = static_cast<int>(i);
        continue;
      }
      const int c = compare(vertices[i].dot(w), vertices[at(best)].dot(w));
      if (c > 0) {
        best = static_cast<int>(i);
        unique = true;
      } else if (c == 0) {
        unique = false;
      }
    }
    if (!unique) throw NotStrictlyConvex("the fan is not the normal fan of the polytope at " + fan.describe(sigma));
    const Vector& p = vertices[at(best)];
    for (int ray : fan.cone(sigma).rays) {
      const Vector& v = fan.rays()[at(ray)];
      for (const Vector& q : vertices) {
        if (compare(q.dot(v), p.dot(v)) > 0) {
          throw NotStrictlyConvex("the fan is not the normal fan of the polytope at " + fan.describe(sigma));
        }
      }
    }
    forms[sigma] = p;
  }
  return convex_function(fan, std::move(forms));
}

namespace {

/// The linear form on each maximal cone with the given values on its rays.
std::optional<std::map<int, Vector>> forms_from_heights(const Fan& fan, const std::vector<Scalar>& heights) {
  std::map<int, Vector> forms;
  for (int sigma : fan.maximal_cones()) {
    const Matrix rt = ray_matrix(fan, sigma).transpose();
    Vector h(rt.rows());
    for (Index i = 0; i < rt.rows(); ++i) h(i) = heights[at(fan.cone(sigma).rays[at(static_cast<int>(i))])];
    if (fanih::rank<Scalar>(rt) != fan.ambient_dim()) return std::nullopt;
    auto l = solve<Scalar>(rt, h);
    if (!l) return std::nullopt;
    forms[sigma] = *l;
  }
  return forms;
}

}  // namespace

ConvexFunction strictly_convex_function(const Fan& fan) {
  if (!fan.is_complete()) throw NotComplete("a strictly convex function is only sought on complete fans");
  const std::size_t rays = fan.rays().size();
  if (auto f = forms_from_heights(fan, std::vector<Scalar>(rays, Scalar(1)))) {
    try {
      return convex_function(fan, *f);
    } catch (const NotStrictlyConvex&) {
    }
  }
  if (fan.is_simplicial()) {
    std::mt19937 rng(12345);
    for (int attempt = 0; attempt < 500; ++attempt) {
      std::uniform_int_distribution<int> dist(1, 4 + attempt / 20);
      std::vector<Scalar> heights;
      for (std::size_t i = 0; i < rays; ++i) heights.emplace_back(dist(rng));
      try {
        return convex_function(fan, *forms_from_heights(fan, heights));
      } catch (const NotStrictlyConvex&) {
      }
    }
  }
  throw NotStrictlyConvex("no strictly convex function found; supply a psi block or a polytope");
}

bool LefschetzReport::passed() const {
  const auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
  return all(bijective) && (!hodge_riemann_checked || all(hodge_riemann));
}

LefschetzReport hard_lefschetz_check(const PairingContext& ctx, const ConvexFunction& psi, bool hodge_riemann) {
  const Fan& fan = *ctx.fan;
  if (!fan.is_complete()) throw NotComplete("hard Lefschetz is checked on complete fans only");
  const int n = static_cast<int>(fan.ambient_dim());
  const Sections& g = ctx.bases.global;
  const FanSheaf& e = ctx.bases.e;

  // multiplication by psi: E_Delta^k -> E_Delta^{k+1}, section coordinates
  const auto multiply = [&](int k, const Matrix& x) -> Matrix {
    if (g.module.dim(k + 1) == 0) return Matrix(0, x.cols());
    if (x.cols() == 0 || g.module.dim(k) == 0) return Matrix::Zero(g.module.dim(k + 1), x.cols());
    std::vector<Matrix> blocks;
    for (int sigma : g.maximal) {
      const Vector c = Poly::linear(psi.forms.at(sigma)).coords(1);
      blocks.push_back(action_matrix(e.stalk(sigma), k, 1, c));
    }
    const Matrix tuples = mul<Scalar>(block_diagonal(blocks), Matrix(mul<Scalar>(g.space(k).basis(), x)));
    const auto c = g.space(k + 1).coords(tuples);
    if (!c) throw std::logic_error("psi times a section is not a section");
    return *c;
  };
  const auto power = [&](int k, Matrix x, int times) {
    for (int t = 0; t < times; ++t) x = multiply(k + t, x);
    return x;
  };

  LefschetzReport rep;
  rep.hodge_riemann_checked = hodge_riemann;
  for (int j = 0; 2 * j <= n; ++j) {
    const Matrix lifts = lifts_at(ctx.bases.ih, j);
    const Index dim = ctx.bases.ih.dim(j);
    Matrix m(ctx.bases.ih.dim(n - j), dim);
    if (dim > 0 && m.rows() > 0) m = mul<Scalar>(ctx.bases.ih.projection[at(n - j - ctx.bases.ih.lo)], power(j, lifts, n - 2 * j));
    const bool ok = invertible(m);
    rep.bijective.push_back(ok);
    if (!ok && rep.witness.empty()) rep.witness = "L^" + std::to_string(n - 2 * j) + " is not bijective on IH^" + std::to_string(2 * j);
    rep.matrices.push_back(m);
    if (!hodge_riemann) continue;

    // primitive classes: kernel of L^{n-2j+1} on IH^j
    Matrix prim = Matrix::Identity(dim, dim);
    if (dim > 0 && ctx.bases.ih.dim(n - j + 1) > 0) {
      prim = fanih::kernel<Scalar>(mul<Scalar>(ctx.bases.ih.projection[at(n - j + 1 - ctx.bases.ih.lo)],
                                               power(j, lifts, n - 2 * j + 1)));
    }
    bool definite = true;
    if (prim.cols() > 0) {
      const Matrix a = mul<Scalar>(lifts, prim);
      const Matrix la = power(j, a, n - 2 * j);
      // complete fan: the relative tuple space is the global one
      Matrix rel(ctx.global.relative.module.dim(n - j), la.cols());
      for (Index c = 0; c < la.cols(); ++c) {
        const auto r = ctx.global.relative.coords(n - j, mul<Scalar>(g.space(n - j).basis(), Vector(la.col(c))));
        if (!r) throw std::logic_error("global section outside the relative sections");
        rel.col(c) = *r;
      }
      Matrix q = ctx.pair_matrix(j, a, n - j, rel);
      if (j % 2 == 1) q = -q;
      for (Index k = 1; k <= q.rows() && definite; ++k) {
        definite = fanih::determinant<Scalar>(Matrix(q.topLeftCorner(k, k))).sign() > 0;
      }
    }
    rep.hodge_riemann.push_back(definite);
    if (!definite && rep.witness.empty()) rep.witness = "Hodge-Riemann sign fails on primitive IH^" + std::to_string(2 * j);
  }
  return rep;
}

}  // namespace fanih
