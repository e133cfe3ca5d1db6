#include "qhh/field.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qhh {

// ---------------------------------------------------------------------------
// Rationals

std::string format_rational(const Rational& x) { return x.get_str(); }

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + i, s.end(), [](unsigned char c) { return std::isdigit(c); });
}

mpz_class parse_integer(const std::string& s) {
  if (!is_integer_token(s)) throw ParseError("not an integer: '" + s + "'");
  return mpz_class(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s));
  mpz_class n = parse_integer(s.substr(0, slash));
  mpz_class d = parse_integer(s.substr(slash + 1));
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

RationalField::value_type RationalField::from_fraction(const mpz_class& n, const mpz_class& d) const {
  if (d == 0) throw PreconditionError("zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::size_t RationalField::pivot_cost(const value_type& x) const {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}

// ---------------------------------------------------------------------------
// Prime fields

ModP::ModP(std::int64_t v, std::uint32_t p) : p_(p) {
  if (p == 0) {
    v_ = 0;
    return;
  }
  std::int64_t r = v % std::int64_t(p);
  if (r < 0) r += p;
  v_ = std::uint32_t(r);
}

ModP ModP::inverse() const {
  if (v_ == 0) throw PreconditionError("division by zero in Fp");
  // Fermat: v^(p-2)
  std::uint64_t base = v_, e = p_ - 2, r = 1;
  while (e) {
    if (e & 1) r = r * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return raw(std::uint32_t(r), p_);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p_) : p(p_) {
  if (p >= (1u << 31) || !is_prime(p)) throw PreconditionError("Fp:" + std::to_string(p) + ": p is not a prime below 2^31");
}

PrimeField::value_type PrimeField::from_fraction(const mpz_class& n, const mpz_class& d) const {
  const mpz_class pz(p);
  const mpz_class nn = ((n % pz) + pz) % pz, dd = ((d % pz) + pz) % pz;
  if (dd == 0) throw PreconditionError("denominator vanishes in " + name());
  return ModP(nn.get_si(), p) / ModP(dd.get_si(), p);
}

// ---------------------------------------------------------------------------
// Polynomials

Polynomial::Polynomial(Rational c) {
  if (!qhh::is_zero(c)) c_.push_back(std::move(c));
}

Polynomial Polynomial::monomial(Rational c, std::size_t k) {
  Polynomial p;
  if (qhh::is_zero(c)) return p;
  p.c_.assign(k + 1, Rational(0));
  p.c_[k] = std::move(c);
  return p;
}

void Polynomial::trim() {
  while (!c_.empty() && qhh::is_zero(c_.back())) c_.pop_back();
}

std::size_t Polynomial::valuation() const {
  std::size_t k = 0;
  while (k < c_.size() && qhh::is_zero(c_[k])) ++k;
  return k == c_.size() ? 0 : k;
}

bool Polynomial::is_monomial() const {
  if (c_.empty()) return false;
  return valuation() + 1 == c_.size();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const auto& big = a.c_.size() >= b.c_.size() ? a : b;
  const auto& small = a.c_.size() >= b.c_.size() ? b : a;
  Polynomial r = big;
  for (std::size_t i = 0; i < small.c_.size(); ++i) r.c_[i] += small.c_[i];
  r.trim();
  return r;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial r = a;
  for (auto& c : r.c_) c = -c;
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  if (a.is_zero() || b.is_zero()) return r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (qhh::is_zero(a.c_[i])) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.trim();
  return r;
}

Polynomial Polynomial::scaled(const Rational& s) const {
  if (qhh::is_zero(s)) return {};
  Polynomial r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  if (d.is_zero()) throw PreconditionError("polynomial division by zero");
  Polynomial rem = *this;
  if (degree() < d.degree()) return {Polynomial{}, rem};
  Polynomial quo;
  quo.c_.assign(std::size_t(degree() - d.degree() + 1), Rational(0));
  const Rational inv_lead = 1 / d.lead();
  while (!rem.is_zero() && rem.degree() >= d.degree()) {
    const std::size_t shift = std::size_t(rem.degree() - d.degree());
    const Rational f = rem.lead() * inv_lead;
    quo.c_[shift] = f;
    for (std::size_t i = 0; i < d.c_.size(); ++i) rem.c_[i + shift] -= f * d.c_[i];
    rem.trim();
  }
  quo.trim();
  return {quo, rem};
}

Polynomial Polynomial::exact_div(const Polynomial& d) const {
  if (d.c_.size() == 1) return scaled(1 / d.c_[0]);
  if (d.is_monomial()) {
    // Division by c*q^k for a polynomial already divisible by q^k.
    const std::size_t k = d.valuation();
    Polynomial r;
    r.c_.assign(c_.begin() + std::ptrdiff_t(std::min(k, c_.size())), c_.end());
    return r.scaled(1 / d.lead());
  }
  return divmod(d).first;
}

Polynomial Polynomial::monic() const {
  if (is_zero() || lead() == 1) return *this;
  return scaled(1 / lead());
}

Rational Polynomial::evaluate(const Rational& x) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

std::string Polynomial::format() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Rational& c = c_[k];
    if (qhh::is_zero(c)) continue;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << "q";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.degree() == 0 || b.degree() == 0) return Polynomial(Rational(1));
  if (a.is_monomial() || b.is_monomial()) {
    const std::size_t k = std::min(a.valuation(), b.valuation());
    return Polynomial::monomial(1, k);
  }
  Polynomial x = a.monic(), y = b.monic();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    Polynomial r = x.divmod(y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

// ---------------------------------------------------------------------------
// Rational functions

RatFunc::RatFunc(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw PreconditionError("rational function with zero denominator");
  if (num.is_zero()) {
    den_ = Polynomial(Rational(1));
    return;
  }
  Polynomial g = gcd(num, den);
  if (!g.is_one()) {
    num = num.exact_div(g);
    den = den.exact_div(g);
  }
  if (den.lead() != 1) {
    const Rational s = 1 / den.lead();
    num = num.scaled(s);
    den = den.scaled(s);
  }
  num_ = std::move(num);
  den_ = std::move(den);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw PreconditionError("division by zero in Qq");
  const Rational s = 1 / num_.lead();
  return RatFunc(den_.scaled(s), num_.scaled(s), Canonical{});
}

Rational RatFunc::evaluate(const Rational& x) const {
  const Rational d = den_.evaluate(x);
  if (qhh::is_zero(d)) throw PreconditionError("q value is a pole");
  return num_.evaluate(x) / d;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.den_.is_one()) return RatFunc(a.num_ + b.num_, a.den_, RatFunc::Canonical{});
    return RatFunc(a.num_ + b.num_, a.den_);
  }
  const Polynomial g = gcd(a.den_, b.den_);
  const Polynomial bd = b.den_.exact_div(g);
  const Polynomial ad = a.den_.exact_div(g);
  return RatFunc(a.num_ * bd + b.num_ * ad, a.den_ * bd);
}

RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num_, a.den_, RatFunc::Canonical{}); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_, a.den_, RatFunc::Canonical{});
  const Polynomial g1 = gcd(a.num_, b.den_);
  const Polynomial g2 = gcd(b.num_, a.den_);
  Polynomial n = a.num_.exact_div(g1) * b.num_.exact_div(g2);
  Polynomial d = a.den_.exact_div(g2) * b.den_.exact_div(g1);
  // Both factors are coprime pairs with monic denominators, so only the
  // leading coefficient of d (a product of monic factors up to scaling) needs fixing.
  if (d.lead() != 1) {
    const Rational s = 1 / d.lead();
    n = n.scaled(s);
    d = d.scaled(s);
  }
  return RatFunc(std::move(n), std::move(d), RatFunc::Canonical{});
}

std::string RatFunc::format() const {
  if (den_.is_one()) return num_.format();
  return "(" + num_.format() + ")/(" + den_.format() + ")";
}

std::size_t RationalFunctionField::pivot_cost(const value_type& x) const {
  const bool simple = x.num().is_monomial() && x.den().is_monomial();
  std::size_t bits = 0;
  for (const auto& c : x.num().coeffs()) bits += mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2);
  if (simple) return bits;
  return 1000 * std::size_t(x.num().degree() + x.den().degree() + 1) + bits;
}

// ---------------------------------------------------------------------------
// Field selection

FieldSpec FieldSpec::parse(const std::string& s) {
  FieldSpec spec;
  if (s == "Q") return spec;
  if (s == "Qq") {
    spec.kind = Kind::rational_functions;
    return spec;
  }
  if (s.rfind("Fp:", 0) == 0) {
    const std::string ps = s.substr(3);
    if (!is_integer_token(ps) || ps[0] == '-') throw ParseError("bad prime in field spec '" + s + "'");
    const mpz_class p(ps);
    if (p >= mpz_class(1u << 31) || !is_prime(p.get_ui())) throw PreconditionError("Fp:" + ps + ": p is not a prime below 2^31");
    spec.kind = Kind::prime;
    spec.p = std::uint32_t(p.get_ui());
    return spec;
  }
  throw ParseError("unknown field '" + s + "' (expected Q, Fp:<p> or Qq)");
}

std::string FieldSpec::name() const {
  switch (kind) {
    case Kind::prime:
      return "Fp:" + std::to_string(p);
    case Kind::rational_functions:
      return "Qq";
    default:
      return "Q";
  }
}

QSpec QSpec::parse(const std::string& s) {
  QSpec spec;
  if (s == "generic") {
    spec.generic = true;
    return spec;
  }
  const Rational r = parse_rational(s);
  spec.num = r.get_num();
  spec.den = r.get_den();
  return spec;
}

std::string QSpec::name() const {
  if (generic) return "generic";
  if (den == 1) return num.get_str();
  return num.get_str() + "/" + den.get_str();
}

}  // namespace qhh
