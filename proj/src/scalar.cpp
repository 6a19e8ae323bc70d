#include "fanih/scalar.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace fanih {

FieldMismatch::FieldMismatch(int d1, int d2)
    : std::domain_error("field mismatch: Q(sqrt(" + std::to_string(d1) + ")) vs Q(sqrt(" +
                        std::to_string(d2) + "))") {}

bool is_squarefree(long d) {
  if (d < 2) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

Field Field::quadratic(int d) {
  if (!is_squarefree(d)) throw ParseError("radicand must be squarefree and >= 2: " + std::to_string(d));
  return Field{d};
}

Field Field::parse(std::string_view text) {
  if (text == "q" || text == "Q") return rational();
  if (text.starts_with("quad:")) {
    std::string rest(text.substr(5));
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(rest, &used);
      if (used != rest.size()) throw ParseError("bad field descriptor: " + std::string(text));
    } catch (const std::logic_error&) {
      throw ParseError("bad field descriptor: " + std::string(text));
    }
    return quadratic(d);
  }
  throw ParseError("bad field descriptor: " + std::string(text));
}

std::string Field::to_string() const {
  return radicand == 0 ? "q" : "quad:" + std::to_string(radicand);
}

Scalar::Scalar(Rational a, Rational b, int radicand) : a_(std::move(a)), d_(radicand) {
  if (d_ != 0 && !is_squarefree(d_)) throw ParseError("radicand must be squarefree: " + std::to_string(d_));
  if (d_ == 0 && !b.is_zero()) throw std::invalid_argument("irrational part without radicand");
  set_b(std::move(b));
}

Scalar Scalar::sqrt(int radicand) { return Scalar(Rational(0), Rational(1), radicand); }

const Rational& Scalar::zero() {
  static const Rational z;
  return z;
}

void Scalar::set_b(Rational b) {
  if (b.is_zero()) {
    b_.reset();
  } else {
    b_ = std::move(b);
  }
}

int Scalar::merged_radicand(const Scalar& o) const {
  if (d_ == o.d_ || o.d_ == 0) return d_;
  if (d_ == 0) return o.d_;
  throw FieldMismatch(d_, o.d_);
}

int Scalar::sign() const {
  const int sa = a_.sign();
  if (!b_) return sa;
  const int sb = b_->sign();
  if (sa == 0 || sa == sb) return sb;
  // opposite signs: compare a^2 with b^2 d
  const Rational lhs = a_ * a_;
  const Rational rhs = *b_ * *b_ * d_;
  if (lhs == rhs) return 0;  // unreachable for squarefree d, kept for totality
  return (lhs > rhs) ? sa : sb;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  d_ = merged_radicand(o);
  a_ += o.a_;
  if (o.b_) set_b(b_ ? *b_ + *o.b_ : *o.b_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  d_ = merged_radicand(o);
  a_ -= o.a_;
  if (o.b_) set_b(b_ ? *b_ - *o.b_ : Rational(-*o.b_));
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  const int d = merged_radicand(o);
  if (!b_ && !o.b_) {
    a_ *= o.a_;
  } else if (!o.b_) {
    a_ *= o.a_;
    set_b(*b_ * o.a_);
  } else if (!b_) {
    set_b(a_ * *o.b_);
    a_ *= o.a_;
  } else {
    Rational na = a_ * o.a_ + *b_ * *o.b_ * d;
    Rational nb = a_ * *o.b_ + *b_ * o.a_;
    a_ = std::move(na);
    set_b(std::move(nb));
  }
  d_ = d;
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (!b_) return Scalar(Rational(1) / a_, Rational(0), d_);
  const Rational norm = a_ * a_ - *b_ * *b_ * d_;
  return Scalar(a_ / norm, -*b_ / norm, d_);
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DivisionByZero();
  merged_radicand(o);
  if (!o.b_) {
    a_ /= o.a_;
    if (b_) *b_ /= o.a_;
    if (d_ == 0) d_ = o.d_;
    return *this;
  }
  return *this *= o.inverse();
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.a_ = -r.a_;
  if (r.b_) *r.b_ = -*r.b_;
  return r;
}

std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
  const int s = compare(x, y);
  return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

int compare(const Scalar& x, const Scalar& y) { return (x - y).sign(); }

namespace {

std::string rational_text(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ParseError("empty number in '" + std::string(whole) + "'");
  const auto slash = s.find('/');
  auto parse_int = [&](std::string_view t) {
    std::size_t i = 0;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) throw ParseError("bad number in '" + std::string(whole) + "'");
    for (std::size_t j = i; j < t.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(t[j]))) throw ParseError("bad number in '" + std::string(whole) + "'");
    }
    std::string str(t[0] == '+' ? t.substr(1) : t);
    return Integer(str);
  };
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  const Integer num = parse_int(s.substr(0, slash));
  const Integer den = parse_int(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(whole) + "'");
  return Rational(num, den);
}

}  // namespace

std::string to_string(const Scalar& x) {
  if (x.is_rational()) return rational_text(x.rational_part());
  std::string out;
  if (!x.rational_part().is_zero()) out = rational_text(x.rational_part());
  const Rational& b = x.irrational_part();
  std::string bt = rational_text(b);
  if (!out.empty() && b.sign() > 0) out += "+";
  out += bt + "*sqrt(" + std::to_string(x.radicand()) + ")";
  return out;
}

Scalar parse_scalar(std::string_view text, Field field) {
  const auto pos = text.find("sqrt(");
  if (pos == std::string_view::npos) return Scalar(parse_rational(text, text));
  if (text.back() != ')') throw ParseError("bad scalar '" + std::string(text) + "'");
  const std::string_view dtext = text.substr(pos + 5, text.size() - pos - 6);
  int d = 0;
  try {
    std::size_t used = 0;
    d = std::stoi(std::string(dtext), &used);
    if (used != dtext.size()) throw ParseError("bad radicand in '" + std::string(text) + "'");
  } catch (const std::logic_error&) {
    throw ParseError("bad radicand in '" + std::string(text) + "'");
  }
  if (!is_squarefree(d)) throw ParseError("radicand not squarefree in '" + std::string(text) + "'");
  if (!field.is_rational() && field.radicand != d) throw FieldMismatch(field.radicand, d);
  // coefficient part: everything before "sqrt(", ending with '*' or empty / sign
  std::string_view head = text.substr(0, pos);
  Rational coeff(1);
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  // split rational part and coefficient at the last '+' or '-' that is not leading
  std::size_t split = std::string_view::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    if (head[i] == '+' || head[i] == '-') {
      split = i;
      break;
    }
  }
  Rational a(0);
  std::string_view cpart = head;
  if (split != std::string_view::npos) {
    a = parse_rational(head.substr(0, split), text);
    cpart = head.substr(split);
    if (cpart[0] == '+') cpart.remove_prefix(1);
  }
  if (cpart.empty() || cpart == "+") {
    coeff = 1;
  } else if (cpart == "-") {
    coeff = -1;
  } else {
    coeff = parse_rational(cpart, text);
  }
  return Scalar(a, coeff, d);
}

std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << to_string(x); }

}  // namespace fanih
