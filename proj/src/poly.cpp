#include "fanih/poly.hpp"

#include <mutex>
#include <sstream>

namespace fanih {

Index monomial_count(int r, int k) {
  if (k < 0 || r < 0) return 0;
  if (r == 0) return k == 0 ? 1 : 0;
  // binomial(k + r - 1, r - 1)
  Index num = 1;
  Index den = 1;
  for (int i = 1; i < r; ++i) {
    num *= (k + i);
    den *= i;
  }
  return num / den;
}

namespace {

void enumerate(int r, int k, Exponent& cur, int pos, std::vector<Exponent>& out) {
  if (pos == r - 1) {
    cur[static_cast<std::size_t>(pos)] = k;
    out.push_back(cur);
    return;
  }
  for (int e = k; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate(r, k - e, cur, pos + 1, out);
  }
}

}  // namespace

const std::vector<Exponent>& monomials(int r, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<Exponent>> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace({r, k});
  if (inserted && k >= 0) {
    if (r == 0) {
      if (k == 0) it->second.push_back({});
    } else {
      Exponent cur(static_cast<std::size_t>(r), 0);
      enumerate(r, k, cur, 0, it->second);
    }
  }
  return it->second;
}

Index monomial_index(const Exponent& e) {
  // rank in descending lex order among monomials of the same degree
  const int r = static_cast<int>(e.size());
  int remaining = 0;
  for (int v : e) remaining += v;
  Index idx = 0;
  for (int pos = 0; pos + 1 < r; ++pos) {
    const int here = e[static_cast<std::size_t>(pos)];
    // monomials with a larger exponent at pos come first
    for (int bigger = remaining; bigger > here; --bigger) idx += monomial_count(r - pos - 1, remaining - bigger);
    remaining -= here;
  }
  return idx;
}

Poly Poly::constant(int nvars, const Scalar& c) {
  Poly p(nvars);
  p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

Poly Poly::variable(int nvars, int i) {
  Poly p(nvars);
  Exponent e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  p.add_term(e, Scalar(1));
  return p;
}

Poly Poly::linear(const Vector& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  Poly p(n);
  for (int i = 0; i < n; ++i) {
    Exponent e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.add_term(e, coeffs(i));
  }
  return p;
}

Poly Poly::from_coords(int nvars, int k, const Vector& coords) {
  const auto& mons = monomials(nvars, k);
  if (static_cast<Index>(mons.size()) != coords.size()) throw std::invalid_argument("Poly::from_coords size mismatch");
  Poly p(nvars);
  for (std::size_t i = 0; i < mons.size(); ++i) p.add_term(mons[i], coords(static_cast<Index>(i)));
  return p;
}

void Poly::add_term(const Exponent& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int Poly::degree() const {
  if (terms_.empty()) return -1;
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int v : e) d += v;
    if (deg >= 0 && d != deg) throw std::logic_error("inhomogeneous polynomial");
    deg = d;
  }
  return deg;
}

Vector Poly::coords(int k) const {
  Vector v = Vector::Zero(monomial_count(nvars_, k));
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int x : e) d += x;
    if (d != k) throw std::logic_error("Poly::coords: term of wrong degree");
    v(monomial_index(e)) = c;
  }
  return v;
}

Scalar Poly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0) : it->second;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("Poly product: variable count mismatch");
  Poly out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly Poly::pow(int e) const {
  Poly out = constant(nvars_, Scalar(1));
  for (int i = 0; i < e; ++i) out = out * *this;
  return out;
}

Poly Poly::substitute(const Matrix& forms) const {
  if (forms.rows() != nvars_) throw std::invalid_argument("Poly::substitute: form count mismatch");
  const int m = static_cast<int>(forms.cols());
  std::vector<Poly> images;
  images.reserve(static_cast<std::size_t>(nvars_));
  for (int i = 0; i < nvars_; ++i) images.push_back(linear(forms.row(i).transpose()));
  Poly out(m);
  for (const auto& [e, c] : terms_) {
    Poly term = constant(m, c);
    for (int i = 0; i < nvars_; ++i) {
      for (int j = 0; j < e[static_cast<std::size_t>(i)]; ++j) term = term * images[static_cast<std::size_t>(i)];
    }
    out += term;
  }
  return out;
}

std::optional<Poly> Poly::divide_linear(const Vector& form) const {
  // Choose the last variable with a nonzero coefficient as the leading one and
  // run univariate long division in that variable.
  int lead = -1;
  for (int i = nvars_ - 1; i >= 0; --i) {
    if (!form(i).is_zero()) {
      lead = i;
      break;
    }
  }
  if (lead < 0) throw DivisionByZero();
  const Scalar lc = form(lead);
  Poly rem = *this;
  Poly quot(nvars_);
  while (!rem.is_zero()) {
    // term with the highest power of the lead variable
    const auto best = std::max_element(rem.terms_.begin(), rem.terms_.end(), [&](const auto& x, const auto& y) {
      return x.first[static_cast<std::size_t>(lead)] < y.first[static_cast<std::size_t>(lead)];
    });
    if (best->first[static_cast<std::size_t>(lead)] == 0) return std::nullopt;
    Exponent e = best->first;
    e[static_cast<std::size_t>(lead)] -= 1;
    const Scalar c = best->second / lc;
    Poly t(nvars_);
    t.add_term(e, c);
    quot += t;
    rem -= t * linear(form);
  }
  return quot;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << fanih::to_string(it->second) << ")";
    for (std::size_t i = 0; i < it->first.size(); ++i) {
      if (it->first[i] == 0) continue;
      os << "*x" << i;
      if (it->first[i] > 1) os << "^" << it->first[i];
    }
  }
  return os.str();
}

Matrix substitution_matrix(const Matrix& forms, int k) {
  const int from = static_cast<int>(forms.rows());
  const int to = static_cast<int>(forms.cols());
  const auto& src = monomials(from, k);
  Matrix m = Matrix::Zero(monomial_count(to, k), static_cast<Index>(src.size()));
  for (std::size_t j = 0; j < src.size(); ++j) {
    Poly p(from);
    p += Poly::from_coords(from, k, Vector::Unit(static_cast<Index>(src.size()), static_cast<Index>(j)));
    const Poly img = p.substitute(forms);
    for (const auto& [e, c] : img.terms()) m(monomial_index(e), static_cast<Index>(j)) = c;
  }
  return m;
}

Matrix variable_shift_matrix(int r, int i, int k) {
  const auto& src = monomials(r, k);
  Matrix m = Matrix::Zero(monomial_count(r, k + 1), static_cast<Index>(src.size()));
  for (std::size_t j = 0; j < src.size(); ++j) {
    Exponent e = src[j];
    e[static_cast<std::size_t>(i)] += 1;
    m(monomial_index(e), static_cast<Index>(j)) = Scalar(1);
  }
  return m;
}

}  // namespace fanih
