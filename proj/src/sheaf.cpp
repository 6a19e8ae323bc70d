#include "fanih/sheaf.hpp"

#include <algorithm>
#include <sstream>

namespace fanih {

namespace {

std::size_t slot(int lo, int k) { return static_cast<std::size_t>(k - lo); }

int cone_dim(const Fan& fan, int c) { return static_cast<int>(fan.cone(c).dim()); }

/// Zero blocks for covering pairs that were never assigned.
void fill_zero_restrictions(FanSheaf& f) {
  for (const auto& [sigma, tau] : f.fan->covering_pairs()) {
    auto& blocks = f.restrictions[{sigma, tau}];
    if (!blocks.empty()) continue;
    for (int k = f.lo; k <= f.hi; ++k) blocks.push_back(Matrix::Zero(f.stalk(tau).dim(k), f.stalk(sigma).dim(k)));
  }
}

/// Position of generator j inside degree a_j of a module built by expand_free.
Index generator_position(const DegreewiseModule& m, std::size_t j) {
  const auto& gens = *m.free_generators;
  const int a = gens[j];
  Index off = 0;
  for (std::size_t l = 0; l < j; ++l) off += monomial_count(m.nvars, a - gens[l]);
  return off;
}

Matrix vstack_rows(const std::vector<Matrix>& parts, Index cols) { return vstack<Scalar>(parts, cols); }

}  // namespace

const Matrix& FanSheaf::restriction(int sigma, int tau, int k) const {
  static const Matrix empty;
  if (k < lo || k > hi) return empty;
  auto it = restrictions.find({sigma, tau});
  if (it == restrictions.end()) throw ConeNotInFan("no covering pair " + fan->describe(sigma) + " > " + fan->describe(tau));
  return it->second[slot(lo, k)];
}

Matrix FanSheaf::restrict(int sigma, int tau, int k) const {
  const Index cols = stalk(sigma).dim(k);
  if (sigma == tau) return Matrix::Identity(cols, cols);
  if (!fan->is_face(tau, sigma)) throw ConeNotInFan(fan->describe(tau) + " is not a face of " + fan->describe(sigma));
  for (int f : fan->cone(sigma).facets) {
    if (fan->is_face(tau, f)) return mul<Scalar>(restrict(f, tau, k), restriction(sigma, f, k));
  }
  throw ConeNotInFan("no chain between cones");
}

std::string FanSheaf::dims_text() const {
  std::ostringstream os;
  for (int c = 0; c < fan->size(); ++c) os << fan->describe(c) << ": " << stalk(c).dims_text() << "\n";
  return os.str();
}

RingMap ambient_ring(const Fan& fan) {
  const Fan* p = &fan;
  return {static_cast<int>(fan.ambient_dim()), [p](int sigma) { return p->ambient_forms(sigma); }};
}

RingMap cone_ring(const Fan& fan, int tau) {
  const Fan* p = &fan;
  return {cone_dim(fan, tau), [p, tau](int sigma) { return p->restriction_forms(tau, sigma); }};
}

RingMap target_ring(const FanMap& f, int tau) {
  const FanMap* p = &f;
  return {cone_dim(*f.target, tau), [p, tau](int sigma) { return p->pullback_forms(tau, sigma); }};
}

Matrix Sections::values_at(const FanSheaf& f, int cone, int k) const {
  const Index n = module.dim(k);
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    if (!f.fan->is_face(cone, maximal[i])) continue;
    const int m = maximal[i];
    const Matrix comp = space(k).basis().middleRows(offsets[slot(lo, k)][i], f.stalk(m).dim(k));
    return mul<Scalar>(f.restrict(m, cone, k), comp);
  }
  if (n == 0) return Matrix(f.stalk(cone).dim(k), 0);
  throw NotASubfan(f.fan->describe(cone) + " is not in the subfan");
}

std::optional<Vector> Sections::coords(int k, const Vector& tuple) const {
  if (!module.in_range(k)) return std::nullopt;
  if (space(k).dim() == 0) {
    if (is_zero<Scalar>(Matrix(tuple))) return Vector(0);
    return std::nullopt;
  }
  return space(k).coords(tuple);
}

Sections sections_over(const FanSheaf& f, const Subfan& sub, const RingMap& ring) {
  const Fan& fan = *f.fan;
  Sections s;
  s.cones = sub;
  s.maximal = fan.maximal_in(sub);
  s.lo = f.lo;
  s.hi = f.hi;
  std::vector<DegreewiseModule> parts;
  for (int m : s.maximal) parts.push_back(restrict_scalars(f.stalk(m), ring.forms(m)));
  if (parts.empty()) {
    s.module = zero_module(ring.nvars, f.lo, f.hi);
    for (int k = f.lo; k <= f.hi; ++k) {
      s.spaces.emplace_back(Matrix(0, 0));
      s.offsets.emplace_back();
    }
    return s;
  }
  std::vector<const DegreewiseModule*> ptrs;
  for (const auto& p : parts) ptrs.push_back(&p);
  const DegreewiseModule sum = direct_sum(ptrs);

  // pairwise agreement on common faces
  std::vector<std::tuple<std::size_t, std::size_t, int>> pairs;
  for (std::size_t i = 0; i < s.maximal.size(); ++i) {
    for (std::size_t j = i + 1; j < s.maximal.size(); ++j) {
      const auto& ri = fan.cone(s.maximal[i]).rays;
      const auto& rj = fan.cone(s.maximal[j]).rays;
      std::vector<int> common;
      std::set_intersection(ri.begin(), ri.end(), rj.begin(), rj.end(), std::back_inserter(common));
      const int gamma = fan.find(common);
      if (gamma < 0) throw NotAFan("cones meet outside a common face");
      pairs.emplace_back(i, j, gamma);
    }
  }
  std::vector<Matrix> blocks;
  for (int k = f.lo; k <= f.hi; ++k) {
    std::vector<Index> off;
    Index at = 0;
    for (int m : s.maximal) {
      off.push_back(at);
      at += f.stalk(m).dim(k);
    }
    std::vector<Matrix> rows;
    for (const auto& [i, j, gamma] : pairs) {
      const Index g = f.stalk(gamma).dim(k);
      if (g == 0) continue;
      Matrix r = Matrix::Zero(g, at);
      const int mi = s.maximal[i];
      const int mj = s.maximal[j];
      r.middleCols(off[i], f.stalk(mi).dim(k)) = f.restrict(mi, gamma, k);
      r.middleCols(off[j], f.stalk(mj).dim(k)) = -f.restrict(mj, gamma, k);
      rows.push_back(std::move(r));
    }
    blocks.push_back(vstack_rows(rows, at));
    s.offsets.push_back(std::move(off));
  }
  Submodule ker = kernel_of(sum, blocks);
  s.module = std::move(ker.module);
  s.spaces = std::move(ker.spaces);
  return s;
}

Sections relative_sections(const FanSheaf& f, const Subfan& sub, const Subfan& sub0, const RingMap& ring) {
  Sections s = sections_over(f, sub, ring);
  const std::vector<int> zero_on = f.fan->maximal_in(sub0);
  if (zero_on.empty()) return s;
  std::vector<Matrix> blocks;
  for (int k = f.lo; k <= f.hi; ++k) {
    std::vector<Matrix> rows;
    for (int c : zero_on) rows.push_back(s.values_at(f, c, k));
    blocks.push_back(vstack_rows(rows, s.module.dim(k)));
  }
  Submodule ker = kernel_of(s.module, blocks);
  for (int k = f.lo; k <= f.hi; ++k) {
    const std::size_t i = slot(f.lo, k);
    const Matrix basis = mul<Scalar>(s.spaces[i].basis(), ker.spaces[i].basis());
    s.spaces[i] = ColumnSpace<Scalar>(basis.cols() == 0 ? Matrix(s.spaces[i].ambient(), 0) : basis);
  }
  s.module = std::move(ker.module);
  return s;
}

Subfan boundary_of_cone(const Fan& fan, int sigma) {
  Subfan out = fan.faces(sigma);
  out.erase(std::remove(out.begin(), out.end(), sigma), out.end());
  return out;
}

Sections relative_stalk(const FanSheaf& f, int sigma) {
  return relative_sections(f, f.fan->faces(sigma), boundary_of_cone(*f.fan, sigma), cone_ring(*f.fan, sigma));
}

Sections boundary_sections(const FanSheaf& f, int sigma) {
  return sections_over(f, boundary_of_cone(*f.fan, sigma), cone_ring(*f.fan, sigma));
}

Matrix boundary_map(const FanSheaf& f, const Sections& boundary, int sigma, int k) {
  const Index cols = f.stalk(sigma).dim(k);
  const Index dim = boundary.module.dim(k);
  if (dim == 0) return Matrix(0, cols);
  std::vector<Matrix> rows;
  for (int m : boundary.maximal) rows.push_back(f.restrict(sigma, m, k));
  const auto c = boundary.space(k).coords(vstack_rows(rows, cols));
  if (!c) throw std::logic_error("restriction does not land in the boundary sections");
  return *c;
}

FanSheaf zero_sheaf(std::shared_ptr<const Fan> fan, int lo, int hi) {
  FanSheaf f;
  f.fan = std::move(fan);
  f.lo = lo;
  f.hi = hi;
  for (int c = 0; c < f.fan->size(); ++c) f.stalks.push_back(zero_module(cone_dim(*f.fan, c), lo, hi));
  return f;
}

FanSheaf structure_sheaf(std::shared_ptr<const Fan> fan, int hi) {
  FanSheaf f = zero_sheaf(std::move(fan), 0, hi);
  for (int c = 0; c < f.fan->size(); ++c) f.stalks[static_cast<std::size_t>(c)] = expand_free(cone_dim(*f.fan, c), {0}, 0, hi);
  for (const auto& [sigma, tau] : f.fan->covering_pairs()) {
    const Matrix forms = f.fan->restriction_forms(sigma, tau);
    auto& blocks = f.restrictions[{sigma, tau}];
    for (int k = 0; k <= hi; ++k) blocks.push_back(substitution_matrix(forms, k));
  }
  return f;
}

FanSheaf simple_sheaf(std::shared_ptr<const Fan> fan, int sigma, int hi) {
  FanSheaf f = zero_sheaf(fan, 0, hi);
  const Fan& fn = *f.fan;
  f.stalks[static_cast<std::size_t>(sigma)] = expand_free(cone_dim(fn, sigma), {0}, 0, hi);
  for (int tau : open_star(fn, sigma)) {
    if (tau == sigma) continue;
    const Sections s = boundary_sections(f, tau);
    const Generators gens = minimal_generators(s.module);
    f.stalks[static_cast<std::size_t>(tau)] = expand_free(cone_dim(fn, tau), gens.degrees, 0, hi);
    for (int gamma : fn.cone(tau).facets) {
      std::vector<std::vector<Poly>> images;
      for (std::size_t j = 0; j < gens.size(); ++j) {
        const int a = gens.degrees[j];
        images.push_back(free_polys(f.stalk(gamma), a, mul<Scalar>(s.values_at(f, gamma, a), gens.elements[j])));
      }
      f.restrictions[{tau, gamma}] =
          free_map(f.stalk(tau), f.stalk(gamma), fn.restriction_forms(tau, gamma), images);
    }
  }
  fill_zero_restrictions(f);
  return f;
}

FanSheaf minimal_extension(std::shared_ptr<const Fan> fan, int hi) { return simple_sheaf(std::move(fan), 0, hi); }

FanSheaf restrict_to_open(const FanSheaf& f, const std::vector<int>& open) {
  FanSheaf g = f;
  std::vector<bool> keep(static_cast<std::size_t>(f.fan->size()), false);
  for (int c : open) keep[static_cast<std::size_t>(c)] = true;
  for (int c = 0; c < f.fan->size(); ++c) {
    if (!keep[static_cast<std::size_t>(c)]) {
      g.stalks[static_cast<std::size_t>(c)] = zero_module(cone_dim(*f.fan, c), f.lo, f.hi);
    }
  }
  for (auto& [key, blocks] : g.restrictions) {
    if (keep[static_cast<std::size_t>(key.first)] && keep[static_cast<std::size_t>(key.second)]) continue;
    for (int k = g.lo; k <= g.hi; ++k) {
      blocks[slot(g.lo, k)] = Matrix::Zero(g.stalk(key.second).dim(k), g.stalk(key.first).dim(k));
    }
  }
  return g;
}

FanSheaf pullback(const FanMap& f, const FanSheaf& g) {
  FanSheaf out = zero_sheaf(f.source, g.lo, g.hi);
  const Fan& src = *f.source;
  for (int nu = 0; nu < src.size(); ++nu) {
    const int tau = f.assignment[static_cast<std::size_t>(nu)];
    if (tau < 0) continue;
    const auto& gm = g.stalk(tau);
    if (!gm.free_generators) throw NotFree("pullback needs stalks with stored free generators");
    out.stalks[static_cast<std::size_t>(nu)] = expand_free(cone_dim(src, nu), *gm.free_generators, g.lo, g.hi);
  }
  for (const auto& [nu, mu] : src.covering_pairs()) {
    const int tau = f.assignment[static_cast<std::size_t>(nu)];
    if (tau < 0) continue;
    const int tau2 = f.assignment[static_cast<std::size_t>(mu)];
    const auto& gm = g.stalk(tau);
    const Matrix pull = f.pullback_forms(tau2, mu);
    std::vector<std::vector<Poly>> images;
    for (std::size_t j = 0; j < gm.free_generators->size(); ++j) {
      const int a = (*gm.free_generators)[j];
      Vector e = Vector::Zero(gm.dim(a));
      e(generator_position(gm, j)) = Scalar(1);
      const Vector y = mul<Scalar>(g.restrict(tau, tau2, a), e);
      std::vector<Poly> polys;
      for (const Poly& p : free_polys(g.stalk(tau2), a, y)) polys.push_back(p.substitute(pull));
      images.push_back(std::move(polys));
    }
    out.restrictions[{nu, mu}] = free_map(out.stalk(nu), out.stalk(mu), src.restriction_forms(nu, mu), images);
  }
  fill_zero_restrictions(out);
  return out;
}

FanSheaf simple_sheaf_via_transversal(std::shared_ptr<const Fan> fan, int sigma, int hi) {
  const Transversal t = transversal_fan(fan, sigma);
  const FanSheaf e = minimal_extension(t.fan, hi);
  return restrict_to_open(pullback(t.projection, e), open_star(*fan, sigma));
}

Pushforward pushforward(const FanMap& f, const FanSheaf& g) {
  Pushforward out;
  const Fan& tgt = *f.target;
  out.sheaf = zero_sheaf(f.target, g.lo, g.hi);
  for (int tau = 0; tau < tgt.size(); ++tau) {
    out.sections.push_back(sections_over(g, f.preimage(tau), target_ring(f, tau)));
    out.sheaf.stalks[static_cast<std::size_t>(tau)] = out.sections.back().module;
  }
  for (const auto& [tau, tau2] : tgt.covering_pairs()) {
    const Sections& s = out.sections[static_cast<std::size_t>(tau)];
    const Sections& s2 = out.sections[static_cast<std::size_t>(tau2)];
    auto& blocks = out.sheaf.restrictions[{tau, tau2}];
    for (int k = g.lo; k <= g.hi; ++k) {
      const Index cols = s.module.dim(k);
      if (s2.module.dim(k) == 0 || cols == 0) {
        blocks.push_back(Matrix::Zero(s2.module.dim(k), cols));
        continue;
      }
      std::vector<Matrix> rows;
      for (int m : s2.maximal) rows.push_back(s.values_at(g, m, k));
      const auto c = s2.space(k).coords(vstack_rows(rows, cols));
      if (!c) throw std::logic_error("pushforward restriction leaves the sections");
      blocks.push_back(*c);
    }
  }
  return out;
}

PerversityReport is_perverse(const FanSheaf& f) {
  PerversityReport rep;
  for (int c = 0; c < f.fan->size(); ++c) {
    const FreenessReport fr = freeness_check(f.stalk(c));
    if (!fr) {
      rep.witness = "stalk at " + f.fan->describe(c) + " is not free (degree " + std::to_string(2 * fr.failing_degree) + ")";
      return rep;
    }
    const Sections s = boundary_sections(f, c);
    for (int k = f.lo; k <= f.hi; ++k) {
      const Matrix m = boundary_map(f, s, c, k);
      if (fanih::rank<Scalar>(m) != s.module.dim(k)) {
        rep.witness = "restriction to the boundary of " + f.fan->describe(c) + " is not onto in degree " +
                      std::to_string(2 * k);
        return rep;
      }
    }
  }
  rep.perverse = true;
  return rep;
}

bool verify_simple_characterization(const FanSheaf& f, int sigma) {
  const Reduction top = reduction_mod_m(f.stalk(sigma));
  for (int k = f.lo; k <= f.hi; ++k) {
    if (top.dim(k) != (k == 0 ? 1 : 0)) return false;
  }
  for (int tau = 0; tau < f.fan->size(); ++tau) {
    if (tau == sigma) continue;
    const Reduction rf = reduction_mod_m(f.stalk(tau));
    const Sections s = boundary_sections(f, tau);
    const Reduction rs = reduction_mod_m(s.module);
    for (int k = f.lo; k <= f.hi; ++k) {
      if (rf.dim(k) != rs.dim(k)) return false;
      if (rf.dim(k) == 0) continue;
      const Matrix bar = mul<Scalar>(rs.projection[slot(f.lo, k)],
                                     mul<Scalar>(boundary_map(f, s, tau, k), rf.lifts[slot(f.lo, k)]));
      if (fanih::rank<Scalar>(bar) != bar.rows()) return false;
    }
  }
  return true;
}

Matrix FreeMorphism::block(const FanSheaf& source, const FanSheaf& target, int nu, int k) const {
  const auto& sm = source.stalk(nu);
  const auto& tm = target.stalk(nu);
  const Index rows = tm.dim(k);
  if (sm.dim(k - shift) == 0) return Matrix(rows, 0);
  const auto& gens = *sm.free_generators;
  const auto& imgs = images[static_cast<std::size_t>(nu)];
  std::vector<Matrix> parts;
  for (std::size_t l = 0; l < gens.size(); ++l) {
    const int a = gens[l];
    if (k - shift < a) continue;
    const Index width = monomial_count(sm.nvars, k - shift - a);
    if (rows == 0 || tm.dim(a + shift) == 0) {
      parts.push_back(Matrix::Zero(rows, width));
      continue;
    }
    parts.push_back(monomial_orbit(tm, a + shift, imgs[l], k - shift - a));
  }
  return hstack<Scalar>(parts, rows);
}

namespace {

/// Extends a morphism _sigma L[-shift] -> F, already fixed at sigma, over the
/// open star by lifting the images of the boundary generators.
void extend_over_star(const FanSheaf& l, const FanSheaf& f, int sigma, FreeMorphism& phi) {
  const Fan& fan = *f.fan;
  for (int nu : open_star(fan, sigma)) {
    if (nu == sigma) continue;
    const Sections sl = boundary_sections(l, nu);
    const Generators gens = minimal_generators(sl.module);
    const Sections sf = boundary_sections(f, nu);
    auto& imgs = phi.images[static_cast<std::size_t>(nu)];
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const int a = gens.degrees[j];
      const int k = a + phi.shift;
      if (k > f.hi) {
        imgs.push_back(Vector(0));
        continue;
      }
      std::vector<Matrix> comps;
      for (int gamma : sf.maximal) {
        const Vector v = mul<Scalar>(sl.values_at(l, gamma, a), gens.elements[j]);
        comps.push_back(mul<Scalar>(phi.block(l, f, gamma, k), Matrix(v)));
      }
      const Matrix tuple = vstack_rows(comps, 1);
      Vector target_coords(0);
      if (sf.module.dim(k) > 0) {
        auto c = sf.coords(k, tuple.col(0));
        if (!c) throw std::logic_error("image is not a section over the boundary");
        target_coords = *c;
      }
      const Matrix bm = boundary_map(f, sf, nu, k);
      auto lift = solve<Scalar>(bm, target_coords);
      if (!lift) throw NotPerverse("restriction to the boundary of " + fan.describe(nu) + " is not onto");
      imgs.push_back(*lift);
    }
  }
}

}  // namespace

Decomposition decompose(const FanSheaf& f) {
  Decomposition out;
  const Fan& fan = *f.fan;
  for (int sigma = 0; sigma < fan.size(); ++sigma) {
    const auto& fs = f.stalk(sigma);
    const Reduction rf = reduction_mod_m(fs);
    const Sections s = boundary_sections(f, sigma);
    const Reduction rs = reduction_mod_m(s.module);
    for (int k = f.lo; k <= f.hi; ++k) {
      if (rf.dim(k) == 0) continue;
      const Matrix bmap = boundary_map(f, s, sigma, k);
      const Matrix bar = mul<Scalar>(rs.projection[slot(f.lo, k)], mul<Scalar>(bmap, rf.lifts[slot(f.lo, k)]));
      const Matrix ker = bar.rows() == 0 ? Matrix(Matrix::Identity(rf.dim(k), rf.dim(k))) : kernel<Scalar>(bar);
      for (Index c = 0; c < ker.cols(); ++c) {
        Vector g = mul<Scalar>(rf.lifts[slot(f.lo, k)], Vector(ker.col(c)));
        const Vector r = mul<Scalar>(bmap, g);
        if (!is_zero<Scalar>(Matrix(r)) && k > f.lo) {
          // r lies in m * F_{boundary}: write r = sum x_i s_i and subtract lifts of the s_i
          const int r_vars = fs.nvars;
          std::vector<Matrix> cols;
          for (int i = 0; i < r_vars; ++i) cols.push_back(s.module.times(i, k - 1));
          const auto si = solve<Scalar>(hstack<Scalar>(cols, s.module.dim(k)), r);
          if (!si) throw std::logic_error("kernel class is not in m F");
          const Matrix bprev = boundary_map(f, s, sigma, k - 1);
          const Index n = s.module.dim(k - 1);
          for (int i = 0; i < r_vars; ++i) {
            const auto t = solve<Scalar>(bprev, Vector(si->segment(i * n, n)));
            if (!t) throw NotPerverse("restriction to the boundary of " + fan.describe(sigma) + " is not onto");
            g -= mul<Scalar>(fs.times(i, k - 1), *t);
          }
        }
        if (!out.simple.count(sigma)) out.simple.emplace(sigma, simple_sheaf(f.fan, sigma, std::max(f.hi, f.hi - f.lo)));
        Summand sm;
        sm.cone = sigma;
        sm.degree = k;
        sm.embedding.shift = k;
        sm.embedding.images.resize(static_cast<std::size_t>(fan.size()));
        sm.embedding.images[static_cast<std::size_t>(sigma)].push_back(g);
        extend_over_star(out.simple.at(sigma), f, sigma, sm.embedding);
        out.multiplicities[sigma].push_back(k);
        out.summands.push_back(std::move(sm));
      }
    }
  }
  out.isomorphism = true;
  for (int nu = 0; nu < fan.size() && out.isomorphism; ++nu) {
    for (int k = f.lo; k <= f.hi; ++k) {
      std::vector<Matrix> parts;
      for (const Summand& sm : out.summands) {
        parts.push_back(sm.embedding.block(out.simple.at(sm.cone), f, nu, k));
      }
      const Matrix total = hstack<Scalar>(parts, f.stalk(nu).dim(k));
      if (total.rows() != total.cols() || fanih::rank<Scalar>(total) != total.rows()) {
        out.isomorphism = false;
        break;
      }
    }
  }
  return out;
}

FreeMorphism MorphismSpace::morphism(const Vector& column, const FanSheaf& source, const FanSheaf& target) const {
  FreeMorphism phi;
  phi.images.resize(offsets.size());
  for (std::size_t nu = 0; nu < offsets.size(); ++nu) {
    const auto& gens = *source.stalk(static_cast<int>(nu)).free_generators;
    for (std::size_t l = 0; l < offsets[nu].size(); ++l) {
      phi.images[nu].push_back(column.segment(offsets[nu][l], target.stalk(static_cast<int>(nu)).dim(gens[l])));
    }
  }
  return phi;
}

MorphismSpace sheaf_morphisms(const FanSheaf& source, const FanSheaf& target) {
  const Fan& fan = *source.fan;
  MorphismSpace ms;
  Index unknowns = 0;
  for (int nu = 0; nu < fan.size(); ++nu) {
    const auto& sm = source.stalk(nu);
    if (!sm.free_generators) throw NotFree("sheaf_morphisms needs a source with free stalks");
    std::vector<Index> off;
    for (int a : *sm.free_generators) {
      off.push_back(unknowns);
      unknowns += target.stalk(nu).dim(a);
    }
    ms.offsets.push_back(std::move(off));
  }
  std::vector<Matrix> rows;
  for (const auto& [nu, mu] : fan.covering_pairs()) {
    const auto& sn = source.stalk(nu);
    const auto& smu = source.stalk(mu);
    const auto& gens = *sn.free_generators;
    const auto& gens_mu = *smu.free_generators;
    for (std::size_t l = 0; l < gens.size(); ++l) {
      const int a = gens[l];
      const Index dim = target.stalk(mu).dim(a);
      if (dim == 0) continue;
      Matrix c = Matrix::Zero(dim, unknowns);
      // rho^G(u_{nu,l})
      const Index width = target.stalk(nu).dim(a);
      if (width > 0) c.middleCols(ms.offsets[static_cast<std::size_t>(nu)][l], width) = target.restriction(nu, mu, a);
      // - phi_mu(rho^F(g_l))
      Vector e = Vector::Zero(sn.dim(a));
      e(generator_position(sn, l)) = Scalar(1);
      const Vector y = mul<Scalar>(source.restriction(nu, mu, a), e);
      const std::vector<Poly> polys = free_polys(smu, a, y);
      for (std::size_t j = 0; j < gens_mu.size(); ++j) {
        const int b = gens_mu[j];
        if (b > a || polys[j].is_zero()) continue;
        const Index w = target.stalk(mu).dim(b);
        if (w == 0) continue;
        c.middleCols(ms.offsets[static_cast<std::size_t>(mu)][j], w) -=
            action_matrix(target.stalk(mu), b, a - b, polys[j].coords(a - b));
      }
      rows.push_back(std::move(c));
    }
  }
  ms.basis = kernel<Scalar>(vstack_rows(rows, unknowns));
  return ms;
}

}  // namespace fanih
