#include "fanih/fan.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace fanih {

namespace {

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

bool subset(const std::vector<int>& small, const std::vector<int>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Matrix rows_of(const Matrix& a, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = a.row(rows[i]);
  return out;
}

std::string vector_text(const Vector& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v(i));
  }
  return s + ")";
}

}  // namespace

Vector normalize_ray(const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!v(i).is_zero()) {
      const Scalar s = abs(v(i));
      Vector out = v;
      for (Index j = 0; j < out.size(); ++j) out(j) /= s;
      return out;
    }
  }
  return v;
}

bool positively_proportional(const Vector& u, const Vector& v) {
  return u.size() == v.size() && normalize_ray(u) == normalize_ray(v);
}

Matrix cone_generators(const Matrix& a) {
  const Index n = a.cols();
  const Index m = a.rows();
  if (n == 0) return Matrix(0, 0);
  const RowEchelon<Scalar> start = rref<Scalar>(Matrix(a.transpose()));
  if (start.rank() != n) throw std::invalid_argument("cone_generators: cone is not pointed");

  struct Gen {
    Vector v;
    std::vector<char> tight;
  };
  std::vector<char> processed(static_cast<std::size_t>(m), 0);
  const Matrix a0 = rows_of(a, start.pivots);
  const Matrix g0 = fanih::inverse<Scalar>(a0);
  std::vector<Gen> gens;
  for (Index j = 0; j < n; ++j) {
    Gen g{g0.col(j), std::vector<char>(static_cast<std::size_t>(m), 0)};
    for (Index i = 0; i < n; ++i) {
      if (i != j) g.tight[static_cast<std::size_t>(start.pivots[static_cast<std::size_t>(i)])] = 1;
    }
    gens.push_back(std::move(g));
  }
  for (Index p : start.pivots) processed[static_cast<std::size_t>(p)] = 1;

  for (Index row = 0; row < m; ++row) {
    if (processed[static_cast<std::size_t>(row)]) continue;
    const Vector arow = a.row(row).transpose();
    std::vector<Scalar> s;
    s.reserve(gens.size());
    for (const Gen& g : gens) s.push_back(arow.dot(g.v));
    std::vector<Gen> next;
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const int sg = s[i].sign();
      if (sg > 0) pos.push_back(i);
      if (sg < 0) neg.push_back(i);
      if (sg >= 0) {
        Gen g = gens[i];
        g.tight[static_cast<std::size_t>(row)] = sg == 0 ? 1 : 0;
        next.push_back(std::move(g));
      }
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        std::vector<Index> common;
        for (Index i = 0; i < m; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          if (processed[ui] && gens[p].tight[ui] && gens[q].tight[ui]) common.push_back(i);
        }
        if (static_cast<Index>(common.size()) < n - 2) continue;
        if (fanih::rank<Scalar>(rows_of(a, common)) != n - 2) continue;
        Gen g{Vector(s[p] * gens[q].v - s[q] * gens[p].v), std::vector<char>(static_cast<std::size_t>(m), 0)};
        for (Index i : common) g.tight[static_cast<std::size_t>(i)] = 1;
        g.tight[static_cast<std::size_t>(row)] = 1;
        next.push_back(std::move(g));
      }
    }
    processed[static_cast<std::size_t>(row)] = 1;
    gens = std::move(next);
  }

  std::vector<Vector> out;
  for (const Gen& g : gens) {
    Vector v = normalize_ray(g.v);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  Matrix result(n, static_cast<Index>(out.size()));
  for (std::size_t j = 0; j < out.size(); ++j) result.col(static_cast<Index>(j)) = out[j];
  return result;
}

bool Cone::in_span(const Vector& v) const {
  if (v.size() != ambient_dim) return false;
  return mul<Scalar>(basis, coordinates(v)) == v;
}

bool Cone::contains(const Vector& v) const {
  if (!in_span(v)) return false;
  const Vector c = coordinates(v);
  const Vector vals = mul<Scalar>(facet_forms, c);
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i).sign() < 0) return false;
  }
  return true;
}

Matrix Cone::inequalities() const {
  const Matrix facets = mul<Scalar>(facet_forms, left_inverse);
  const Matrix ann = kernel<Scalar>(Matrix(basis.transpose())).transpose();
  return vstack<Scalar>({facets, ann, Matrix(-ann)}, ambient_dim);
}

Cone build_cone(const std::vector<Vector>& generators) {
  if (generators.empty()) throw EmptyInput();
  Cone c;
  c.ambient_dim = generators.front().size();
  std::vector<Vector> distinct;
  for (const Vector& g : generators) {
    if (g.size() != c.ambient_dim) throw std::invalid_argument("build_cone: generators of different dimensions");
    if (is_zero<Scalar>(g)) continue;
    if (std::none_of(distinct.begin(), distinct.end(), [&](const Vector& d) { return positively_proportional(d, g); }))
      distinct.push_back(g);
  }
  const Index n = c.ambient_dim;
  Matrix r(n, static_cast<Index>(distinct.size()));
  for (std::size_t j = 0; j < distinct.size(); ++j) r.col(static_cast<Index>(j)) = distinct[j];
  const Index d = fanih::rank<Scalar>(r);
  c.dim = d;
  c.basis = d == n ? Matrix(Matrix::Identity(n, n)) : column_basis<Scalar>(r);
  c.left_inverse = d == 0 ? Matrix(0, n) : ColumnSpace<Scalar>(c.basis).left_inverse();
  if (d == 0) {
    c.facet_forms = Matrix(0, 0);
    return c;
  }
  const Matrix local = mul<Scalar>(c.left_inverse, r);  // d x k
  const Matrix dual = cone_generators(Matrix(local.transpose()));
  if (dual.cols() == 0 || fanih::rank<Scalar>(dual) < d) {
    throw NotStrictlyConvex("NotStrictlyConvex: the generators span a cone containing a line");
  }
  c.facet_forms = dual.transpose();
  for (std::size_t j = 0; j < distinct.size(); ++j) {
    const Vector vals = mul<Scalar>(c.facet_forms, Vector(local.col(static_cast<Index>(j))));
    std::vector<Index> zero;
    for (Index i = 0; i < vals.size(); ++i) {
      if (vals(i).is_zero()) zero.push_back(i);
    }
    const Index zr = zero.empty() ? 0 : fanih::rank<Scalar>(rows_of(c.facet_forms, zero));
    if (zr == d - 1) {
      c.rays.push_back(distinct[j]);
    } else {
      c.non_extreme.push_back(distinct[j]);
    }
  }
  return c;
}

namespace {

Cone zero_cone_in(Index n) {
  Cone c;
  c.ambient_dim = n;
  c.basis = Matrix(n, 0);
  c.left_inverse = Matrix(0, n);
  c.facet_forms = Matrix(0, 0);
  return c;
}

}  // namespace

int Fan::find(const std::vector<int>& rays) const {
  auto it = index_.find(rays);
  return it == index_.end() ? -1 : it->second;
}

bool Fan::is_face(int tau, int sigma) const { return subset(cone(tau).rays, cone(sigma).rays); }

std::vector<int> Fan::cones_of_dim(Index d) const {
  std::vector<int> out;
  for (const auto& c : cones_) {
    if (c.dim() == d) out.push_back(c.id);
  }
  return out;
}

std::vector<int> Fan::maximal_cones() const {
  std::vector<int> out;
  for (const auto& c : cones_) {
    if (c.cofacets.empty()) out.push_back(c.id);
  }
  return out;
}

std::vector<int> Fan::faces(int sigma) const {
  std::vector<int> out;
  for (const auto& c : cones_) {
    if (c.dim() <= cone(sigma).dim() && subset(c.rays, cone(sigma).rays)) out.push_back(c.id);
  }
  return out;
}

std::vector<std::pair<int, int>> Fan::covering_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& c : cones_) {
    for (int f : c.facets) out.emplace_back(c.id, f);
  }
  return out;
}

bool Fan::is_pure() const {
  const auto m = maximal_cones();
  return std::all_of(m.begin(), m.end(), [&](int c) { return cone(c).dim() == ambient_dim_; });
}

bool Fan::is_complete() const {
  if (!is_pure()) return false;
  for (int w : cones_of_dim(ambient_dim_ - 1)) {
    if (cone(w).cofacets.size() != 2) return false;
  }
  return true;
}

bool Fan::is_simplicial() const {
  return std::all_of(cones_.begin(), cones_.end(), [](const FanCone& c) { return c.geometry.is_simplicial(); });
}

int Fan::smallest_cone_containing(const Vector& v) const {
  for (const auto& c : cones_) {
    if (c.geometry.contains(v)) return c.id;
  }
  return -1;
}

Matrix Fan::restriction_forms(int from, int to) const {
  if (cone(to).dim() == 0) return Matrix(cone(from).dim(), 0);
  const Matrix x = mul<Scalar>(cone(from).geometry.left_inverse, cone(to).geometry.basis);
  if (mul<Scalar>(cone(from).geometry.basis, x) != cone(to).geometry.basis) {
    throw std::invalid_argument("restriction_forms: " + describe(to) + " is not in the span of " + describe(from));
  }
  return x;
}

Matrix Fan::ambient_forms(int to) const { return cone(to).geometry.basis; }

Subfan Fan::all() const {
  Subfan s(cones_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<int>(i);
  return s;
}

Subfan Fan::closure(const std::vector<int>& generators) const {
  std::vector<int> out;
  for (int g : generators) out = sorted_union(std::move(out), faces(g));
  return out;
}

std::vector<int> Fan::maximal_in(const Subfan& s) const {
  std::vector<int> out;
  for (int c : s) {
    const auto& cof = cone(c).cofacets;
    if (std::none_of(cof.begin(), cof.end(), [&](int x) { return std::binary_search(s.begin(), s.end(), x); }))
      out.push_back(c);
  }
  return out;
}

std::string Fan::describe(int id) const {
  std::string s = "<";
  bool first = true;
  for (int r : cone(id).rays) {
    if (!first) s += ",";
    first = false;
    s += vector_text(rays_[static_cast<std::size_t>(r)]);
  }
  return s + ">";
}

Fan assemble_fan(const std::vector<Cone>& maximal, Field field) {
  if (maximal.empty()) throw EmptyInput();
  Fan fan;
  fan.field_ = field;
  fan.ambient_dim_ = maximal.front().ambient_dim;
  for (const Cone& c : maximal) {
    if (c.ambient_dim != fan.ambient_dim_) throw NotAFan("NotAFan: cones live in different dimensions");
  }
  auto ray_index = [&](const Vector& v) {
    const Vector nv = normalize_ray(v);
    for (std::size_t i = 0; i < fan.rays_.size(); ++i) {
      if (fan.rays_[i] == nv) return static_cast<int>(i);
    }
    fan.rays_.push_back(nv);
    return static_cast<int>(fan.rays_.size() - 1);
  };

  std::map<std::vector<int>, Cone> geometry;
  std::map<std::vector<int>, std::vector<std::vector<int>>> facets;
  std::function<void(const std::vector<int>&, const Cone&)> add = [&](const std::vector<int>& rs, const Cone& c) {
    if (geometry.count(rs)) return;
    geometry.emplace(rs, c);
    std::vector<std::vector<int>> fs;
    for (Index f = 0; f < c.facet_forms.rows(); ++f) {
      std::vector<int> sub;
      std::vector<Vector> gens;
      for (int r : rs) {
        const Vector& v = fan.rays_[static_cast<std::size_t>(r)];
        if (c.facet_forms.row(f).dot(c.coordinates(v)).is_zero()) {
          sub.push_back(r);
          gens.push_back(v);
        }
      }
      add(sub, gens.empty() ? zero_cone_in(fan.ambient_dim_) : build_cone(gens));
      fs.push_back(sub);
    }
    facets[rs] = std::move(fs);
  };

  std::vector<std::vector<int>> inputs;
  for (const Cone& c : maximal) {
    std::vector<int> rs;
    for (const Vector& v : c.rays) rs.push_back(ray_index(v));
    std::sort(rs.begin(), rs.end());
    inputs.push_back(rs);
  }
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    std::vector<Vector> gens;
    for (int r : inputs[i]) gens.push_back(fan.rays_[static_cast<std::size_t>(r)]);
    add(inputs[i], gens.empty() ? zero_cone_in(fan.ambient_dim_) : build_cone(gens));
  }
  if (!geometry.count({})) add({}, zero_cone_in(fan.ambient_dim_));

  std::vector<std::vector<int>> order;
  for (const auto& [rs, c] : geometry) order.push_back(rs);
  std::stable_sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
    const Index dx = geometry.at(x).dim;
    const Index dy = geometry.at(y).dim;
    return dx != dy ? dx < dy : x < y;
  });
  for (const auto& rs : order) {
    FanCone fc;
    fc.id = static_cast<int>(fan.cones_.size());
    fc.rays = rs;
    fc.geometry = geometry.at(rs);
    fan.index_[rs] = fc.id;
    fan.cones_.push_back(std::move(fc));
  }
  for (auto& fc : fan.cones_) {
    for (const auto& f : facets.at(fc.rays)) fc.facets.push_back(fan.index_.at(f));
    std::sort(fc.facets.begin(), fc.facets.end());
  }
  for (const auto& fc : fan.cones_) {
    for (int f : fc.facets) fan.cones_[static_cast<std::size_t>(f)].cofacets.push_back(fc.id);
  }
  for (auto& fc : fan.cones_) std::sort(fc.cofacets.begin(), fc.cofacets.end());

  // every pair of maximal cones must meet in a common face
  const auto maxi = fan.maximal_cones();
  for (std::size_t i = 0; i < maxi.size(); ++i) {
    for (std::size_t j = i + 1; j < maxi.size(); ++j) {
      const FanCone& a = fan.cone(maxi[i]);
      const FanCone& b = fan.cone(maxi[j]);
      std::vector<int> common;
      std::set_intersection(a.rays.begin(), a.rays.end(), b.rays.begin(), b.rays.end(), std::back_inserter(common));
      const int tau = fan.find(common);
      const std::string pair = fan.describe(a.id) + " and " + fan.describe(b.id);
      if (tau < 0) throw NotAFan("NotAFan: " + pair + " share rays that do not span a common face");
      const auto fa = fan.faces(a.id);
      const auto fb = fan.faces(b.id);
      if (!std::binary_search(fa.begin(), fa.end(), tau) || !std::binary_search(fb.begin(), fb.end(), tau)) {
        throw NotAFan("NotAFan: " + pair + " share rays that do not span a common face");
      }
      const Matrix ineq = vstack<Scalar>({a.geometry.inequalities(), b.geometry.inequalities()}, fan.ambient_dim_);
      const Matrix gens = cone_generators(ineq);
      for (Index g = 0; g < gens.cols(); ++g) {
        if (!fan.cone(tau).geometry.contains(gens.col(g))) {
          throw NotAFan("NotAFan: " + pair + " overlap beyond a common face (intersection contains " +
                        vector_text(gens.col(g)) + ")");
        }
      }
    }
  }
  return fan;
}

Subfan boundary_fan(const Fan& fan) {
  if (!fan.is_pure()) throw NotPure("NotPure: maximal cones of different dimensions");
  std::vector<int> walls;
  for (int w : fan.cones_of_dim(fan.ambient_dim() - 1)) {
    if (fan.cone(w).cofacets.size() == 1) walls.push_back(w);
  }
  return fan.closure(walls);
}

std::vector<int> open_star(const Fan& fan, int sigma) {
  if (sigma < 0 || sigma >= fan.size()) throw ConeNotInFan("ConeNotInFan: no cone with id " + std::to_string(sigma));
  std::vector<int> out;
  for (const auto& c : fan.cones()) {
    if (fan.is_face(sigma, c.id)) out.push_back(c.id);
  }
  return out;
}

Subfan star(const Fan& fan, int sigma) { return fan.closure(open_star(fan, sigma)); }

Subfan FanMap::preimage(int tau) const {
  Subfan out;
  for (std::size_t c = 0; c < assignment.size(); ++c) {
    if (assignment[c] >= 0 && target->is_face(assignment[c], tau)) out.push_back(static_cast<int>(c));
  }
  return out;
}

Matrix FanMap::pullback_forms(int tau, int sigma) const {
  const Cone& t = target->cone(tau).geometry;
  const Cone& s = source->cone(sigma).geometry;
  if (s.dim == 0) return Matrix(t.dim, 0);
  const Matrix img = mul<Scalar>(linear, s.basis);
  const Matrix x = mul<Scalar>(t.left_inverse, img);
  if (mul<Scalar>(t.basis, x) != img) throw std::invalid_argument("pullback_forms: image not in the target span");
  return x;
}

FanMap make_fan_map(std::shared_ptr<const Fan> source, const Subfan& domain, std::shared_ptr<const Fan> target,
                    Matrix linear) {
  FanMap f;
  f.source = std::move(source);
  f.target = std::move(target);
  f.linear = std::move(linear);
  f.assignment.assign(static_cast<std::size_t>(f.source->size()), -1);
  for (int c : domain) {
    const FanCone& fc = f.source->cone(c);
    Vector sum = Vector::Zero(f.linear.rows());
    std::vector<Vector> images;
    for (int r : fc.rays) {
      images.push_back(mul<Scalar>(f.linear, f.source->rays()[static_cast<std::size_t>(r)]));
      sum += images.back();
    }
    const int t = f.target->smallest_cone_containing(sum);
    if (t < 0) throw NotAFan("NotAFan: image of " + f.source->describe(c) + " is outside the target fan");
    for (const Vector& im : images) {
      if (!f.target->cone(t).geometry.contains(im)) {
        throw NotAFan("NotAFan: image of " + f.source->describe(c) + " lies in no target cone");
      }
    }
    f.assignment[static_cast<std::size_t>(c)] = t;
  }
  return f;
}

Transversal transversal_fan(std::shared_ptr<const Fan> fan, int sigma) {
  const auto up = open_star(*fan, sigma);
  Transversal out;
  const FanCone& s = fan->cone(sigma);
  const Index n = fan->ambient_dim();
  out.quotient = s.dim() == 0 ? Matrix(Matrix::Identity(n, n)) : Matrix(kernel<Scalar>(Matrix(s.geometry.basis.transpose())).transpose());
  const Index m = out.quotient.rows();
  std::vector<Cone> cones;
  for (int t : fan->maximal_in(star(*fan, sigma))) {
    if (!std::binary_search(up.begin(), up.end(), t)) continue;
    std::vector<Vector> gens;
    for (int r : fan->cone(t).rays) {
      if (!std::binary_search(s.rays.begin(), s.rays.end(), r)) {
        gens.push_back(mul<Scalar>(out.quotient, fan->rays()[static_cast<std::size_t>(r)]));
      }
    }
    cones.push_back(gens.empty() ? zero_cone_in(m) : build_cone(gens));
  }
  out.fan = std::make_shared<const Fan>(assemble_fan(cones, fan->field()));
  out.projection = make_fan_map(fan, star(*fan, sigma), out.fan, out.quotient);
  return out;
}

FanMap refinement_map(std::shared_ptr<const Fan> fine, std::shared_ptr<const Fan> coarse) {
  const Index n = fine->ambient_dim();
  const Subfan dom = fine->all();
  return make_fan_map(std::move(fine), dom, std::move(coarse), Matrix::Identity(n, n));
}

Refinement stellar_subdivide(std::shared_ptr<const Fan> fan, const Vector& ray) {
  if (is_zero<Scalar>(ray) || fan->smallest_cone_containing(ray) < 0) {
    throw RayOutsideSupport("RayOutsideSupport: " + vector_text(ray) + " is not a nonzero vector of the support");
  }
  std::vector<Cone> cones;
  for (int m : fan->maximal_cones()) {
    const FanCone& c = fan->cone(m);
    if (!c.geometry.contains(ray)) {
      cones.push_back(c.geometry);
      continue;
    }
    for (int f : c.facets) {
      const FanCone& fc = fan->cone(f);
      if (fc.geometry.contains(ray)) continue;
      std::vector<Vector> gens;
      for (int r : fc.rays) gens.push_back(fan->rays()[static_cast<std::size_t>(r)]);
      gens.push_back(ray);
      cones.push_back(build_cone(gens));
    }
  }
  Refinement out;
  out.fan = std::make_shared<const Fan>(assemble_fan(cones, fan->field()));
  out.map = refinement_map(out.fan, fan);
  return out;
}

Refinement simplicialize(std::shared_ptr<const Fan> fan) {
  std::shared_ptr<const Fan> cur = fan;
  for (;;) {
    int pick = -1;
    for (const auto& c : cur->cones()) {
      if (!c.geometry.is_simplicial() && (pick < 0 || c.dim() > cur->cone(pick).dim())) pick = c.id;
    }
    if (pick < 0) break;
    Vector sum = Vector::Zero(cur->ambient_dim());
    for (int r : cur->cone(pick).rays) sum += cur->rays()[static_cast<std::size_t>(r)];
    cur = stellar_subdivide(cur, sum).fan;
  }
  Refinement out;
  out.fan = cur;
  out.map = refinement_map(cur, fan);
  return out;
}

OrientationData orient_cones(const Fan& fan) {
  OrientationData o;
  for (const auto& [sigma, tau] : fan.covering_pairs()) {
    const FanCone& s = fan.cone(sigma);
    const FanCone& t = fan.cone(tau);
    int outside = -1;
    for (int r : s.rays) {
      if (!std::binary_search(t.rays.begin(), t.rays.end(), r)) {
        outside = r;
        break;
      }
    }
    Matrix m(s.dim(), s.dim());
    m.leftCols(t.dim()) = fan.restriction_forms(sigma, tau);
    m.col(s.dim() - 1) = s.geometry.coordinates(fan.rays()[static_cast<std::size_t>(outside)]);
    o.epsilon[{sigma, tau}] = determinant<Scalar>(m).sign();
  }
  return o;
}

std::vector<Index> reduced_betti_of_order_complex(const std::vector<std::vector<bool>>& less) {
  const std::size_t n = less.size();
  // chains grouped by length; chains[k] holds k-element chains (dimension k-1)
  std::vector<std::vector<std::vector<int>>> chains{{{}}};
  for (;;) {
    std::vector<std::vector<int>> next;
    for (const auto& c : chains.back()) {
      for (std::size_t x = 0; x < n; ++x) {
        if (c.empty() || less[static_cast<std::size_t>(c.back())][x]) {
          auto d = c;
          d.push_back(static_cast<int>(x));
          next.push_back(std::move(d));
        }
      }
    }
    if (next.empty()) break;
    chains.push_back(std::move(next));
  }
  std::vector<std::map<std::vector<int>, Index>> index(chains.size());
  for (std::size_t k = 0; k < chains.size(); ++k) {
    for (std::size_t i = 0; i < chains[k].size(); ++i) index[k][chains[k][i]] = static_cast<Index>(i);
  }
  // ranks[k]: rank of the boundary from k-element chains to (k-1)-element chains
  std::vector<Index> ranks(chains.size() + 1, 0);
  for (std::size_t k = 1; k < chains.size(); ++k) {
    Matrix d = Matrix::Zero(static_cast<Index>(chains[k - 1].size()), static_cast<Index>(chains[k].size()));
    for (std::size_t j = 0; j < chains[k].size(); ++j) {
      const auto& c = chains[k][j];
      for (std::size_t i = 0; i < c.size(); ++i) {
        auto face = c;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
        d(index[k - 1].at(face), static_cast<Index>(j)) = Scalar(i % 2 == 0 ? 1 : -1);
      }
    }
    ranks[k] = fanih::rank<Scalar>(d);
  }
  std::vector<Index> betti;
  for (std::size_t k = 0; k < chains.size(); ++k) {
    betti.push_back(static_cast<Index>(chains[k].size()) - ranks[k] - ranks[k + 1]);
  }
  return betti;
}

QuasiConvexity is_quasi_convex(const Fan& fan) {
  QuasiConvexity q;
  if (!fan.is_pure()) {
    q.reason = "not purely " + std::to_string(fan.ambient_dim()) + "-dimensional";
    return q;
  }
  if (fan.is_complete()) {
    q.quasi_convex = true;
    return q;
  }
  const Index n = fan.ambient_dim();
  const Subfan bd = boundary_fan(fan);
  std::vector<int> nonzero;
  for (int c : bd) {
    if (c != fan.zero_cone()) nonzero.push_back(c);
  }
  auto is_sphere = [](const std::vector<Index>& betti, Index dim) {
    // betti[k] is the reduced Betti number in dimension k-1
    for (std::size_t k = 0; k < betti.size(); ++k) {
      const Index expect = static_cast<Index>(k) - 1 == dim ? 1 : 0;
      if (betti[k] != expect) return false;
    }
    return dim + 1 < static_cast<Index>(betti.size());
  };
  auto poset = [&](const std::vector<int>& elems) {
    std::vector<std::vector<bool>> less(elems.size(), std::vector<bool>(elems.size(), false));
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < elems.size(); ++j) {
        less[i][j] = i != j && fan.is_face(elems[i], elems[j]);
      }
    }
    return reduced_betti_of_order_complex(less);
  };
  if (!is_sphere(poset(nonzero), n - 2)) {
    q.reason = "the boundary is not a homology sphere of dimension " + std::to_string(n - 2);
    return q;
  }
  for (int t : nonzero) {
    std::vector<int> above;
    for (int c : nonzero) {
      if (c != t && fan.is_face(t, c)) above.push_back(c);
    }
    if (!is_sphere(poset(above), n - 2 - fan.cone(t).dim())) {
      q.reason = "the boundary is not a homology manifold at " + fan.describe(t);
      return q;
    }
  }
  q.quasi_convex = true;
  return q;
}

}  // namespace fanih
