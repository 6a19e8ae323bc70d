#include "fanih/duality.hpp"

#include <algorithm>

namespace fanih {

namespace {

std::size_t at(int c) { return static_cast<std::size_t>(c); }

int cone_dim(const Fan& fan, int c) { return static_cast<int>(fan.cone(c).dim()); }

/// Coordinates in V_sigma of a ray of sigma outside tau.
Vector outside_ray(const Fan& fan, int sigma, int tau) {
  const auto& rs = fan.cone(sigma).rays;
  const auto& rt = fan.cone(tau).rays;
  for (int r : rs) {
    if (!std::binary_search(rt.begin(), rt.end(), r)) return fan.cone(sigma).geometry.coordinates(fan.rays()[at(r)]);
  }
  throw NotAFacet(fan.describe(tau) + " is not a proper face of " + fan.describe(sigma));
}

/// The form on V_sigma with kernel V_tau, positive on sigma.
Vector facet_form(const Fan& fan, int sigma, int tau) {
  const Matrix x = fan.restriction_forms(sigma, tau);
  const Matrix k = kernel<Scalar>(Matrix(x.transpose()));
  Vector h = k.col(0);
  if (h.dot(outside_ray(fan, sigma, tau)).sign() < 0) h = -h;
  return h;
}

/// psi_h(omega_sigma) / omega_tau for omega_sigma = h ^ eta: det[v | X] / h(v).
Scalar determinant_factor(const Fan& fan, int sigma, int tau, const Vector& h) {
  const Matrix x = fan.restriction_forms(sigma, tau);
  const Vector v = outside_ray(fan, sigma, tau);
  Matrix m(x.rows(), x.cols() + 1);
  m.col(0) = v;
  m.rightCols(x.cols()) = x;
  return determinant<Scalar>(m) / h.dot(v);
}

Matrix ring_substitution(const Matrix& forms, int k) {
  if (k < 0) return Matrix(0, 0);
  return substitution_matrix(forms, k);
}

}  // namespace

std::vector<Matrix> facet_restriction(const FanSheaf& f, const DualSheaf& d, int sigma, int tau, const Vector& h) {
  const Fan& fan = *f.fan;
  const auto& facets = fan.cone(sigma).facets;
  if (std::find(facets.begin(), facets.end(), tau) == facets.end()) {
    throw NotAFacet(fan.describe(tau) + " is not a facet of " + fan.describe(sigma));
  }
  const Matrix x = fan.restriction_forms(sigma, tau);
  if (is_zero<Scalar>(Matrix(h)) || !is_zero<Scalar>(mul<Scalar>(Matrix(h.transpose()), x))) {
    throw WrongKernel("the form does not have kernel V_tau");
  }
  const int s = cone_dim(fan, sigma);
  const HomModule& hs = d.homs[at(sigma)];
  const HomModule& ht = d.homs[at(tau)];
  const Sections& rs = d.relative[at(sigma)];
  const Sections& rt = d.relative[at(tau)];
  const Sections sb = boundary_sections(f, sigma);
  const auto& fs = f.stalk(sigma);

  // h * g-hat for each generator g of F_(tau, boundary tau), in F_(sigma, boundary sigma)
  std::vector<int> degrees;
  std::vector<Vector> ws;
  for (std::size_t j = 0; j < ht.source_generators.size(); ++j) {
    const int b = ht.source_generators.degrees[j];
    const Vector g = mul<Scalar>(rt.space(b).basis(), ht.source_generators.elements[j]);
    std::vector<Matrix> comps;
    for (int m : sb.maximal) comps.push_back(m == tau ? Matrix(g) : Matrix(Matrix::Zero(f.stalk(m).dim(b), 1)));
    const auto c = sb.coords(b, vstack<Scalar>(comps, 1).col(0));
    if (!c) throw std::logic_error("extension by zero is not a boundary section");
    const auto lift = solve<Scalar>(boundary_map(f, sb, sigma, b), *c);
    if (!lift) throw NotPerverse("restriction to the boundary of " + fan.describe(sigma) + " is not onto");
    if (b + 1 > f.hi) throw CutoffTooSmall("dual restriction needs degree " + std::to_string(2 * (b + 1)));
    Vector hg = Vector::Zero(fs.dim(b + 1));
    for (Index i = 0; i < h.size(); ++i) {
      if (h(i).is_zero()) continue;
      hg += mul<Scalar>(fs.times(static_cast<int>(i), b), *lift) * h(i);
    }
    const auto w = rs.coords(b + 1, hg);
    if (!w) throw std::logic_error("h g-hat does not vanish on the boundary");
    degrees.push_back(b);
    ws.push_back(*w);
  }

  const Scalar factor = determinant_factor(fan, sigma, tau, h);
  std::vector<Matrix> blocks;
  for (int k = d.sheaf.lo; k <= d.sheaf.hi; ++k) {
    const Index rows = d.sheaf.stalk(tau).dim(k);
    const Index cols = d.sheaf.stalk(sigma).dim(k);
    if (rows == 0 || cols == 0) {
      blocks.push_back(Matrix::Zero(rows, cols));
      continue;
    }
    const int dd = k - s;
    std::vector<Matrix> parts;
    for (std::size_t j = 0; j < ws.size(); ++j) {
      const int e = degrees[j] + 1;
      const Matrix sub = ring_substitution(x, e + dd);
      if (sub.rows() == 0) continue;
      parts.push_back(mul<Scalar>(sub, hs.evaluation(d.rings[at(sigma)], dd, ws[j], e)));
    }
    Matrix block = vstack<Scalar>(parts, cols);
    if (block.rows() != rows) throw std::logic_error("dual restriction has the wrong shape");
    blocks.push_back(block * factor);
  }
  return blocks;
}

DegreewiseModule dual_module(const FanSheaf& f, int sigma) {
  const int s = cone_dim(*f.fan, sigma);
  const Sections rel = relative_stalk(f, sigma);
  const DegreewiseModule ring = expand_free(s, {0}, 0, 2 * f.hi + 1);
  const HomModule hom = hom_degreewise(rel.module, ring);
  DegreewiseModule m = hom.module;
  m.lo += s;
  m.hi += s;
  return m;
}

std::string chain_inconsistency(const FanSheaf& f) {
  const Fan& fan = *f.fan;
  for (int sigma = 0; sigma < fan.size(); ++sigma) {
    const auto& facets = fan.cone(sigma).facets;
    for (std::size_t i = 0; i < facets.size(); ++i) {
      for (std::size_t j = i + 1; j < facets.size(); ++j) {
        const int t1 = facets[i];
        const int t2 = facets[j];
        for (int gamma : fan.cone(t1).facets) {
          const auto& f2 = fan.cone(t2).facets;
          if (std::find(f2.begin(), f2.end(), gamma) == f2.end()) continue;
          for (int k = f.lo; k <= f.hi; ++k) {
            const Matrix a = mul<Scalar>(f.restriction(t1, gamma, k), f.restriction(sigma, t1, k));
            const Matrix b = mul<Scalar>(f.restriction(t2, gamma, k), f.restriction(sigma, t2, k));
            if (a != b) {
              return "chains from " + fan.describe(sigma) + " to " + fan.describe(gamma) + " differ in degree " +
                     std::to_string(2 * k);
            }
          }
        }
      }
    }
  }
  return {};
}

DualSheaf dual_sheaf(const FanSheaf& f, const OrientationData& orient) {
  const Fan& fan = *f.fan;
  DualSheaf d;
  d.orientation = orient;
  int lo = f.hi;
  bool any = false;
  for (int c = 0; c < fan.size(); ++c) {
    d.relative.push_back(relative_stalk(f, c));
    const Generators gens = minimal_generators(d.relative.back().module);
    if (gens.size() > 0) {
      lo = std::min(lo, cone_dim(fan, c) - gens.max_degree());
      any = true;
    }
  }
  if (!any) lo = f.lo;
  const int hi = f.hi;
  d.sheaf = zero_sheaf(f.fan, lo, hi);
  for (int c = 0; c < fan.size(); ++c) {
    const int s = cone_dim(fan, c);
    d.rings.push_back(expand_free(s, {0}, 0, f.hi + hi - s));
    d.homs.push_back(hom_degreewise(d.relative[at(c)].module, d.rings.back()));
    DegreewiseModule m = d.homs.back().module;
    m.lo += s;
    m.hi += s;
    d.sheaf.stalks[at(c)] = with_range(m, lo, hi);
  }
  for (const auto& [sigma, tau] : fan.covering_pairs()) {
    std::vector<Matrix> blocks = facet_restriction(f, d, sigma, tau, facet_form(fan, sigma, tau));
    if (orient.sign(sigma, tau) < 0) {
      for (Matrix& b : blocks) b = -b;
    }
    d.sheaf.restrictions[{sigma, tau}] = std::move(blocks);
  }
  const std::string bad = chain_inconsistency(d.sheaf);
  if (!bad.empty()) throw ChainInconsistency(bad);
  return d;
}

DualSheaf dual_sheaf(const FanSheaf& f) { return dual_sheaf(f, orient_cones(*f.fan)); }

PerversityReport verify_perverse_dual(const FanSheaf& f) { return is_perverse(dual_sheaf(f).sheaf); }

GlobalDualIso global_dual_iso(const FanSheaf& f, const DualSheaf& d) {
  const Fan& fan = *f.fan;
  const QuasiConvexity qc = is_quasi_convex(fan);
  if (!qc) throw NotQuasiConvex("fan is not quasi-convex: " + qc.reason);
  const int n = static_cast<int>(fan.ambient_dim());
  GlobalDualIso g;
  g.lo = d.sheaf.lo;
  g.hi = d.sheaf.hi;
  const RingMap ring = ambient_ring(fan);
  g.relative = relative_sections(f, fan.all(), fan.is_complete() ? Subfan{} : boundary_fan(fan), ring);
  g.ring = expand_free(n, {0}, 0, f.hi + g.hi - n);
  g.hom = hom_degreewise(g.relative.module, g.ring);
  g.dual_sections = sections_over(d.sheaf, fan.all(), ring);
  g.bijective = true;
  const auto& maximal = g.relative.maximal;
  for (int k = g.lo; k <= g.hi; ++k) {
    const int dd = k - n;
    const Index cols = g.hom.module.dim(dd);
    std::vector<Matrix> comps;
    for (std::size_t i = 0; i < maximal.size(); ++i) {
      const int sigma = maximal[i];
      const HomModule& hs = d.homs[at(sigma)];
      const Sections& rs = d.relative[at(sigma)];
      std::vector<Matrix> parts;
      for (std::size_t j = 0; j < hs.source_generators.size(); ++j) {
        const int b = hs.source_generators.degrees[j];
        const Vector gj = mul<Scalar>(rs.space(b).basis(), hs.source_generators.elements[j]);
        // extension by zero to the whole fan
        std::vector<Matrix> tuple;
        for (int m : maximal) tuple.push_back(m == sigma ? Matrix(gj) : Matrix(Matrix::Zero(f.stalk(m).dim(b), 1)));
        const auto w = g.relative.coords(b, vstack<Scalar>(tuple, 1).col(0));
        if (!w) throw std::logic_error("extension by zero does not vanish on the boundary");
        if (g.ring.dim(b + dd) == 0) continue;
        parts.push_back(cols == 0 ? Matrix(g.ring.dim(b + dd), 0) : g.hom.evaluation(g.ring, dd, *w, b));
      }
      comps.push_back(vstack<Scalar>(parts, cols));
    }
    const Matrix tuples = vstack<Scalar>(comps, cols);
    Matrix m;
    if (g.dual_sections.module.dim(k) == 0) {
      if (!is_zero<Scalar>(tuples)) throw std::logic_error("image outside the dual sections");
      m = Matrix(0, cols);
    } else {
      const auto c = g.dual_sections.space(k).coords(tuples);
      if (!c) throw std::logic_error("image outside the dual sections");
      m = *c;
    }
    if (m.rows() != m.cols() || fanih::rank<Scalar>(m) != m.rows()) g.bijective = false;
    g.matrices.push_back(std::move(m));
  }
  return g;
}

namespace {

/// Restriction Hom^dd(F_sigma, A_sigma) -> Hom^dd(F_(sigma, boundary sigma), A_sigma).
Matrix restriction_to_relative(const HomModule& full, const HomModule& rel, const Sections& rs,
                               const DegreewiseModule& ring, int dd) {
  std::vector<Matrix> parts;
  for (std::size_t j = 0; j < rel.source_generators.size(); ++j) {
    const int b = rel.source_generators.degrees[j];
    if (ring.dim(b + dd) == 0) continue;
    const Vector g = mul<Scalar>(rs.space(b).basis(), rel.source_generators.elements[j]);
    parts.push_back(full.evaluation(ring, dd, g, b));
  }
  return vstack<Scalar>(parts, full.module.dim(dd));
}

}  // namespace

bool relative_dual_check(const FanSheaf& f, const DualSheaf& d, int sigma) {
  const int s = cone_dim(*f.fan, sigma);
  const DegreewiseModule& ring = d.rings[at(sigma)];
  const HomModule full = hom_degreewise(f.stalk(sigma), ring);
  const Sections rel_dual = relative_stalk(d.sheaf, sigma);
  for (int k = d.sheaf.lo; k <= d.sheaf.hi; ++k) {
    const int dd = k - s;
    const Index dim = d.sheaf.stalk(sigma).dim(k);
    Matrix image(dim, 0);
    if (dim > 0 && full.module.in_range(dd) && full.module.dim(dd) > 0) {
      image = restriction_to_relative(full, d.homs[at(sigma)], d.relative[at(sigma)], ring, dd);
    }
    const Matrix& sub = rel_dual.space(k).basis();
    const Index r_image = fanih::rank<Scalar>(image);
    const Index r_sub = rel_dual.module.dim(k);
    if (r_image != r_sub) return false;
    if (r_sub == 0) continue;
    if (fanih::rank<Scalar>(hstack<Scalar>({image, sub}, dim)) != r_sub) return false;
  }
  return true;
}

BidualityReport biduality(const FanSheaf& f) {
  const Fan& fan = *f.fan;
  BidualityReport rep;
  const DualSheaf d = dual_sheaf(f);
  const DualSheaf dd = dual_sheaf(d.sheaf);
  const int lo = std::max(f.lo, dd.sheaf.lo);
  const int hi = std::min(f.hi, dd.sheaf.hi);
  // beta[sigma][k - lo] : F_sigma^k -> DDF_sigma^k
  std::vector<std::vector<Matrix>> beta(at(fan.size()));
  rep.stalkwise = true;
  for (int sigma = 0; sigma < fan.size(); ++sigma) {
    const int s = cone_dim(fan, sigma);
    const DegreewiseModule& ring = dd.rings[at(sigma)];
    const HomModule full = hom_degreewise(f.stalk(sigma), ring);
    const HomModule& outer = dd.homs[at(sigma)];
    const Sections& rel_dual = dd.relative[at(sigma)];
    // psi_j in Hom(F_sigma, A_sigma) restricting to the generators of (DF)_(sigma, boundary sigma)
    std::vector<int> shifts;
    std::vector<Vector> psis;
    for (std::size_t j = 0; j < outer.source_generators.size(); ++j) {
      const int c = outer.source_generators.degrees[j];
      const Vector u = mul<Scalar>(rel_dual.space(c).basis(), outer.source_generators.elements[j]);
      const int e = c - s;
      const Matrix res = restriction_to_relative(full, d.homs[at(sigma)], d.relative[at(sigma)], ring, e);
      const auto psi = solve<Scalar>(res, u);
      if (!psi) {
        rep.stalkwise = false;
        rep.witness = "a relative dual generator at " + fan.describe(sigma) + " is not a restriction";
        return rep;
      }
      shifts.push_back(e);
      psis.push_back(*psi);
    }
    for (int k = lo; k <= hi; ++k) {
      const Index rows = dd.sheaf.stalk(sigma).dim(k);
      const Index cols = f.stalk(sigma).dim(k);
      std::vector<Matrix> parts;
      for (std::size_t j = 0; j < psis.size(); ++j) {
        if (ring.dim(k + shifts[j]) == 0) continue;
        parts.push_back(cols == 0 ? Matrix(ring.dim(k + shifts[j]), 0) : full.apply(ring, shifts[j], psis[j], k));
      }
      Matrix b = rows == 0 ? Matrix(0, cols) : vstack<Scalar>(parts, cols);
      if (b.rows() != rows) throw std::logic_error("biduality map has the wrong shape");
      if (rows != cols || fanih::rank<Scalar>(b) != rows) {
        rep.stalkwise = false;
        if (rep.witness.empty()) rep.witness = "beta is not bijective at " + fan.describe(sigma) + " in degree " + std::to_string(2 * k);
      }
      beta[at(sigma)].push_back(std::move(b));
    }
  }
  rep.natural = true;
  for (const auto& [sigma, tau] : fan.covering_pairs()) {
    for (int k = lo; k <= hi; ++k) {
      const std::size_t i = static_cast<std::size_t>(k - lo);
      const Matrix left = mul<Scalar>(beta[at(tau)][i], f.restriction(sigma, tau, k));
      const Matrix right = mul<Scalar>(dd.sheaf.restriction(sigma, tau, k), beta[at(sigma)][i]);
      if (left != right) {
        rep.natural = false;
        if (rep.witness.empty()) {
          rep.witness = "beta does not commute with the restriction " + fan.describe(sigma) + " > " + fan.describe(tau);
        }
      }
    }
  }
  return rep;
}

}  // namespace fanih
