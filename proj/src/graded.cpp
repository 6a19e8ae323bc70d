#include "fanih/graded.hpp"

#include <algorithm>
#include <sstream>

namespace fanih {

namespace {

std::size_t slot(const DegreewiseModule& m, int k) { return static_cast<std::size_t>(k - m.lo); }

Matrix scaled_sum(const std::vector<Matrix>& mats, const Matrix& forms, Index row, Index rows, Index cols) {
  Matrix out = Matrix::Zero(rows, cols);
  for (Index j = 0; j < forms.cols(); ++j) {
    const Scalar& c = forms(row, j);
    if (c.is_zero()) continue;
    const Matrix& m = mats[static_cast<std::size_t>(j)];
    for (Index b = 0; b < m.cols(); ++b)
      for (Index a = 0; a < m.rows(); ++a)
        if (!m(a, b).is_zero()) out(a, b) += c * m(a, b);
  }
  return out;
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix out = Matrix::Zero(r, c);
  Index ro = 0;
  Index co = 0;
  for (const auto& b : blocks) {
    out.block(ro, co, b.rows(), b.cols()) = b;
    ro += b.rows();
    co += b.cols();
  }
  return out;
}

// One more degree of a monomial orbit: cur holds the columns m * y for all
// monomials of degree s - 1, located in degree base + s - 1.
Matrix extend_orbit(const DegreewiseModule& m, int base, int s, const Matrix& cur) {
  const auto& mons = monomials(m.nvars, s);
  Matrix next = Matrix::Zero(m.dim(base + s), static_cast<Index>(mons.size()));
  if (next.rows() == 0 || cur.rows() == 0) return next;
  std::vector<std::optional<Matrix>> prod(static_cast<std::size_t>(m.nvars));
  for (std::size_t c = 0; c < mons.size(); ++c) {
    const Exponent& e = mons[c];
    int i = 0;
    while (e[static_cast<std::size_t>(i)] == 0) ++i;
    auto& p = prod[static_cast<std::size_t>(i)];
    if (!p) p = mul<Scalar>(m.times(i, base + s - 1), cur);
    Exponent prev = e;
    prev[static_cast<std::size_t>(i)] -= 1;
    next.col(static_cast<Index>(c)) = p->col(monomial_index(prev));
  }
  return next;
}

}  // namespace

bool DegreewiseModule::is_zero() const {
  return std::all_of(dims.begin(), dims.end(), [](Index d) { return d == 0; });
}

std::string DegreewiseModule::dims_text() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int k = lo; k <= hi; ++k) {
    if (dim(k) == 0) continue;
    if (!first) os << ", ";
    first = false;
    os << 2 * k << ":" << dim(k);
  }
  os << "}";
  return os.str();
}

DegreewiseModule zero_module(int nvars, int lo, int hi) {
  DegreewiseModule m;
  m.nvars = nvars;
  m.lo = lo;
  m.hi = hi;
  m.dims.assign(static_cast<std::size_t>(std::max(0, hi - lo + 1)), 0);
  for (int k = lo; k < hi; ++k) m.mult.emplace_back(static_cast<std::size_t>(nvars), Matrix(0, 0));
  m.free_generators = std::vector<int>{};
  return m;
}

DegreewiseModule expand_free(int nvars, const std::vector<int>& gens, int hi) {
  int lo = 0;
  for (int a : gens) lo = std::min(lo, a);
  return expand_free(nvars, gens, lo, hi);
}

DegreewiseModule expand_free(int nvars, const std::vector<int>& gens, int lo, int hi) {
  for (int a : gens) {
    if (a > hi) throw CutoffTooSmall("generator in degree " + std::to_string(2 * a) + " above the cutoff " + std::to_string(2 * hi));
    if (a < lo) throw std::invalid_argument("expand_free: generator below the degree window");
  }
  DegreewiseModule m;
  m.nvars = nvars;
  m.lo = lo;
  m.hi = hi;
  m.free_generators = gens;
  for (int k = lo; k <= hi; ++k) {
    Index d = 0;
    for (int a : gens) d += monomial_count(nvars, k - a);
    m.dims.push_back(d);
  }
  for (int k = lo; k < hi; ++k) {
    std::vector<Matrix> per_var;
    for (int i = 0; i < nvars; ++i) {
      std::vector<Matrix> blocks;
      for (int a : gens) {
        if (k - a >= 0) {
          blocks.push_back(variable_shift_matrix(nvars, i, k - a));
        } else {
          blocks.push_back(Matrix::Zero(monomial_count(nvars, k + 1 - a), 0));
        }
      }
      per_var.push_back(block_diagonal(blocks));
    }
    m.mult.push_back(std::move(per_var));
  }
  return m;
}

DegreewiseModule with_range(const DegreewiseModule& m, int lo, int hi) {
  DegreewiseModule out;
  out.nvars = m.nvars;
  out.lo = lo;
  out.hi = hi;
  for (int k = lo; k <= hi; ++k) out.dims.push_back(m.dim(k));
  for (int k = lo; k < hi; ++k) {
    std::vector<Matrix> per_var;
    for (int i = 0; i < m.nvars; ++i) {
      if (k >= m.lo && k + 1 <= m.hi) {
        per_var.push_back(m.times(i, k));
      } else {
        per_var.push_back(Matrix::Zero(out.dim(k + 1), out.dim(k)));
      }
    }
    out.mult.push_back(std::move(per_var));
  }
  if (m.free_generators) {
    const auto& g = *m.free_generators;
    if (std::all_of(g.begin(), g.end(), [&](int a) { return a >= lo && a <= hi; }) && lo <= m.lo) out.free_generators = g;
  }
  return out;
}

bool multiplication_commutes(const DegreewiseModule& m) {
  for (int k = m.lo; k + 2 <= m.hi; ++k) {
    for (int i = 0; i < m.nvars; ++i) {
      for (int j = i + 1; j < m.nvars; ++j) {
        if (mul<Scalar>(m.times(i, k + 1), m.times(j, k)) != mul<Scalar>(m.times(j, k + 1), m.times(i, k))) return false;
      }
    }
  }
  return true;
}

std::vector<Index> Reduction::dims() const {
  std::vector<Index> out;
  for (const auto& l : lifts) out.push_back(l.cols());
  return out;
}

Reduction reduction_mod_m(const DegreewiseModule& m) {
  Reduction r;
  r.lo = m.lo;
  r.hi = m.hi;
  for (int k = m.lo; k <= m.hi; ++k) {
    const Index d = m.dim(k);
    Matrix image(d, 0);
    if (k > m.lo && m.dim(k - 1) > 0) {
      std::vector<Matrix> parts;
      for (int i = 0; i < m.nvars; ++i) parts.push_back(m.times(i, k - 1));
      image = hstack<Scalar>(parts, d);
    }
    Matrix aug(d, image.cols() + d);
    aug << image, Matrix::Identity(d, d);
    const RowEchelon<Scalar> e = rref<Scalar>(aug);
    std::vector<Index> image_cols;
    std::vector<Index> complement;
    for (Index p : e.pivots) {
      if (p < image.cols()) {
        image_cols.push_back(p);
      } else {
        complement.push_back(p - image.cols());
      }
    }
    Matrix lifts = Matrix::Zero(d, static_cast<Index>(complement.size()));
    for (std::size_t c = 0; c < complement.size(); ++c) lifts(complement[c], static_cast<Index>(c)) = Scalar(1);
    Matrix full(d, d);
    for (std::size_t c = 0; c < image_cols.size(); ++c) full.col(static_cast<Index>(c)) = image.col(image_cols[c]);
    full.rightCols(lifts.cols()) = lifts;
    const Matrix inv = d == 0 ? Matrix(0, 0) : fanih::inverse<Scalar>(full);
    r.lifts.push_back(lifts);
    r.projection.push_back(inv.bottomRows(lifts.cols()));
  }
  return r;
}

int Generators::max_degree() const {
  if (degrees.empty()) throw std::logic_error("no generators");
  return *std::max_element(degrees.begin(), degrees.end());
}

Generators minimal_generators(const DegreewiseModule& m) {
  const Reduction r = reduction_mod_m(m);
  Generators g;
  for (int k = m.lo; k <= m.hi; ++k) {
    const Matrix& l = r.lifts[static_cast<std::size_t>(k - m.lo)];
    for (Index c = 0; c < l.cols(); ++c) {
      g.degrees.push_back(k);
      g.elements.push_back(l.col(c));
    }
  }
  return g;
}

Matrix monomial_orbit(const DegreewiseModule& m, int b, const Vector& y, int t) {
  if (b < m.lo || m.dim(b) == 0) return Matrix::Zero(m.dim(b + t), monomial_count(m.nvars, t));
  if (b + t > m.hi) throw CutoffTooSmall("monomial orbit beyond the cutoff");
  Matrix cur(m.dim(b), 1);
  cur.col(0) = y;
  for (int s = 1; s <= t; ++s) cur = extend_orbit(m, b, s, cur);
  return cur;
}

Matrix action_matrix(const DegreewiseModule& m, int b, int t, const Vector& coeffs) {
  Matrix out = Matrix::Zero(m.dim(b + t), m.dim(b));
  if (out.rows() == 0 || out.cols() == 0) return out;
  for (Index i = 0; i < out.cols(); ++i) {
    out.col(i) = mul<Scalar>(monomial_orbit(m, b, Vector(Vector::Unit(out.cols(), i)), t), coeffs);
  }
  return out;
}

std::vector<Matrix> expansion(const DegreewiseModule& m, const Generators& gens) {
  std::vector<Matrix> out;
  std::vector<Matrix> orbit(gens.size());
  for (int k = m.lo; k <= m.hi; ++k) {
    std::vector<Matrix> parts;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const int a = gens.degrees[j];
      if (k < a) continue;
      if (k == a) {
        orbit[j] = Matrix(m.dim(a), 1);
        orbit[j].col(0) = gens.elements[j];
      } else {
        orbit[j] = extend_orbit(m, a, k - a, orbit[j]);
      }
      parts.push_back(orbit[j]);
    }
    out.push_back(hstack<Scalar>(parts, m.dim(k)));
  }
  return out;
}

FreenessReport freeness_check(const DegreewiseModule& m) {
  FreenessReport rep;
  const Generators g = minimal_generators(m);
  rep.generator_degrees = g.degrees;
  const auto e = expansion(m, g);
  for (int k = m.lo; k <= m.hi; ++k) {
    const Matrix& x = e[slot(m, k)];
    if (x.rows() != x.cols() || fanih::rank<Scalar>(x) != x.rows()) {
      rep.failing_degree = k;
      return rep;
    }
  }
  rep.free = true;
  return rep;
}

DegreewiseModule restrict_scalars(const DegreewiseModule& m, const Matrix& forms) {
  if (forms.cols() != m.nvars) throw IncompatibleShapes("restrict_scalars: form length differs from variable count");
  DegreewiseModule out;
  out.nvars = static_cast<int>(forms.rows());
  out.lo = m.lo;
  out.hi = m.hi;
  out.dims = m.dims;
  for (int k = m.lo; k < m.hi; ++k) {
    std::vector<Matrix> per_var;
    for (Index i = 0; i < forms.rows(); ++i) {
      per_var.push_back(scaled_sum(m.mult[slot(m, k)], forms, i, m.dim(k + 1), m.dim(k)));
    }
    out.mult.push_back(std::move(per_var));
  }
  return out;
}

DegreewiseModule direct_sum(const std::vector<const DegreewiseModule*>& parts) {
  if (parts.empty()) throw IncompatibleShapes("direct_sum of nothing");
  const DegreewiseModule& f = *parts.front();
  for (const auto* p : parts) {
    if (p->nvars != f.nvars || p->lo != f.lo || p->hi != f.hi) throw IncompatibleShapes("direct_sum: different rings or windows");
  }
  DegreewiseModule out;
  out.nvars = f.nvars;
  out.lo = f.lo;
  out.hi = f.hi;
  for (int k = f.lo; k <= f.hi; ++k) {
    Index d = 0;
    for (const auto* p : parts) d += p->dim(k);
    out.dims.push_back(d);
  }
  for (int k = f.lo; k < f.hi; ++k) {
    std::vector<Matrix> per_var;
    for (int i = 0; i < f.nvars; ++i) {
      std::vector<Matrix> blocks;
      for (const auto* p : parts) blocks.push_back(p->times(i, k));
      per_var.push_back(block_diagonal(blocks));
    }
    out.mult.push_back(std::move(per_var));
  }
  return out;
}

Submodule submodule(const DegreewiseModule& ambient, const std::vector<Matrix>& bases) {
  Submodule s;
  s.module.nvars = ambient.nvars;
  s.module.lo = ambient.lo;
  s.module.hi = ambient.hi;
  for (int k = ambient.lo; k <= ambient.hi; ++k) {
    s.spaces.emplace_back(bases[slot(ambient, k)]);
    s.module.dims.push_back(bases[slot(ambient, k)].cols());
  }
  for (int k = ambient.lo; k < ambient.hi; ++k) {
    std::vector<Matrix> per_var;
    for (int i = 0; i < ambient.nvars; ++i) {
      const Matrix img = mul<Scalar>(ambient.times(i, k), s.spaces[slot(ambient, k)].basis());
      auto c = s.spaces[slot(ambient, k + 1)].coords(img);
      if (!c) throw std::logic_error("submodule: span not closed under multiplication in degree " + std::to_string(2 * k));
      per_var.push_back(std::move(*c));
    }
    s.module.mult.push_back(std::move(per_var));
  }
  return s;
}

Submodule kernel_of(const DegreewiseModule& m, const std::vector<Matrix>& blocks) {
  std::vector<Matrix> bases;
  for (int k = m.lo; k <= m.hi; ++k) {
    const Matrix& b = blocks[slot(m, k)];
    if (b.cols() != m.dim(k)) throw IncompatibleShapes("kernel_of: block width differs from module dimension");
    bases.push_back(b.rows() == 0 ? Matrix(Matrix::Identity(m.dim(k), m.dim(k))) : kernel<Scalar>(b));
  }
  return submodule(m, bases);
}

Submodule equalizer(const DegreewiseModule& m, const std::vector<Matrix>& f, const std::vector<Matrix>& g) {
  std::vector<Matrix> diff;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].rows() != g[i].rows() || f[i].cols() != g[i].cols()) throw IncompatibleShapes("equalizer: maps of different shapes");
    diff.push_back(f[i] - g[i]);
  }
  return kernel_of(m, diff);
}

Index HomModule::offset(const DegreewiseModule& target, int d, std::size_t j) const {
  Index off = 0;
  for (std::size_t l = 0; l < j; ++l) off += target.dim(source_generators.degrees[l] + d);
  return off;
}

Matrix HomModule::apply(const DegreewiseModule& target, int d, const Vector& f, int e) const {
  if (e + d > target.hi) throw CutoffTooSmall("Hom evaluation beyond the target cutoff");
  std::vector<Matrix> parts;
  for (std::size_t j = 0; j < source_generators.size(); ++j) {
    const int a = source_generators.degrees[j];
    if (e < a) continue;
    const Index off = offset(target, d, j);
    const Vector y = f.segment(off, target.dim(a + d));
    parts.push_back(monomial_orbit(target, a + d, y, e - a));
  }
  const Matrix images = hstack<Scalar>(parts, target.dim(e + d));
  const std::size_t s = static_cast<std::size_t>(e - source_lo);
  return mul<Scalar>(images, source_inverse_expansion[s]);
}

Matrix HomModule::evaluation(const DegreewiseModule& target, int d, const Vector& w, int e) const {
  if (e + d > target.hi) throw CutoffTooSmall("Hom evaluation beyond the target cutoff");
  const Matrix& inv = source_inverse_expansion[static_cast<std::size_t>(e - source_lo)];
  const Vector c = mul<Scalar>(inv, w);
  Matrix out = Matrix::Zero(target.dim(e + d), module.dim(d));
  Index at = 0;
  for (std::size_t j = 0; j < source_generators.size(); ++j) {
    const int a = source_generators.degrees[j];
    if (e < a) continue;
    const Index n = monomial_count(target.nvars, e - a);
    const Index off = offset(target, d, j);
    const Index width = target.dim(a + d);
    if (width > 0) out.middleCols(off, width) = action_matrix(target, a + d, e - a, c.segment(at, n));
    at += n;
  }
  return out;
}

Vector HomModule::from_images(const DegreewiseModule& target, int d, const std::vector<Vector>& images) const {
  Vector out(module.dim(d));
  Index off = 0;
  for (std::size_t j = 0; j < images.size(); ++j) {
    out.segment(off, images[j].size()) = images[j];
    off += images[j].size();
  }
  (void)target;
  return out;
}

HomModule hom_degreewise(const DegreewiseModule& source, const DegreewiseModule& target) {
  if (source.nvars != target.nvars) throw IncompatibleShapes("hom_degreewise: modules over different rings");
  const FreenessReport fr = freeness_check(source);
  if (!fr) {
    throw CutoffTooSmall("hom_degreewise: source module is not free below the cutoff (degree " +
                         std::to_string(2 * fr.failing_degree) + ")");
  }
  HomModule h;
  h.source_generators = minimal_generators(source);
  h.source_lo = source.lo;
  for (const Matrix& e : expansion(source, h.source_generators)) {
    h.source_inverse_expansion.push_back(e.rows() == 0 ? Matrix(0, 0) : fanih::inverse<Scalar>(e));
  }
  const auto& gens = h.source_generators;
  const int amax = gens.size() == 0 ? 0 : gens.max_degree();
  DegreewiseModule& m = h.module;
  m.nvars = target.nvars;
  m.lo = target.lo - amax;
  m.hi = target.hi - amax;
  for (int d = m.lo; d <= m.hi; ++d) {
    Index dim = 0;
    for (int a : gens.degrees) dim += target.dim(a + d);
    m.dims.push_back(dim);
  }
  for (int d = m.lo; d < m.hi; ++d) {
    std::vector<Matrix> per_var;
    for (int i = 0; i < m.nvars; ++i) {
      std::vector<Matrix> blocks;
      for (int a : gens.degrees) {
        if (target.dim(a + d) == 0 || a + d < target.lo) {
          blocks.push_back(Matrix::Zero(target.dim(a + d + 1), target.dim(a + d)));
        } else {
          blocks.push_back(target.times(i, a + d));
        }
      }
      per_var.push_back(block_diagonal(blocks));
    }
    m.mult.push_back(std::move(per_var));
  }
  return h;
}

std::vector<Poly> free_polys(const DegreewiseModule& m, int k, const Vector& v) {
  if (!m.free_generators) throw std::logic_error("free_polys: module has no free basis");
  std::vector<Poly> out;
  Index off = 0;
  for (int a : *m.free_generators) {
    const Index c = monomial_count(m.nvars, k - a);
    if (c == 0) {
      out.emplace_back(m.nvars);
      continue;
    }
    out.push_back(Poly::from_coords(m.nvars, k - a, v.segment(off, c)));
    off += c;
  }
  return out;
}

Vector free_vector(const DegreewiseModule& m, int k, const std::vector<Poly>& comps) {
  if (!m.free_generators) throw std::logic_error("free_vector: module has no free basis");
  Vector out = Vector::Zero(m.dim(k));
  Index off = 0;
  const auto& gens = *m.free_generators;
  for (std::size_t j = 0; j < gens.size(); ++j) {
    const Index c = monomial_count(m.nvars, k - gens[j]);
    if (c == 0) {
      if (!comps[j].is_zero()) throw std::logic_error("free_vector: component of wrong degree");
      continue;
    }
    out.segment(off, c) = comps[j].coords(k - gens[j]);
    off += c;
  }
  return out;
}

std::vector<Matrix> free_map(const DegreewiseModule& source, const DegreewiseModule& target, const Matrix& forms,
                             const std::vector<std::vector<Poly>>& images) {
  if (!source.free_generators || !target.free_generators) throw std::logic_error("free_map: modules must be free");
  const auto& gens = *source.free_generators;
  std::vector<Matrix> out;
  for (int k = source.lo; k <= source.hi; ++k) {
    Matrix block = Matrix::Zero(target.dim(k), source.dim(k));
    Index col = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const int t = k - gens[j];
      if (t < 0) continue;
      const Matrix sub = substitution_matrix(forms, t);
      const Index count = monomial_count(source.nvars, t);
      for (Index c = 0; c < count; ++c, ++col) {
        if (target.dim(k) == 0) continue;
        const Poly p = Poly::from_coords(target.nvars, t, sub.col(c));
        if (p.is_zero()) continue;
        std::vector<Poly> comps;
        for (const Poly& q : images[j]) comps.push_back(q.is_zero() ? q : p * q);
        block.col(col) = free_vector(target, k, comps);
      }
    }
    out.push_back(std::move(block));
  }
  return out;
}

}  // namespace fanih
