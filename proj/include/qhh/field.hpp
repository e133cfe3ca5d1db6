#pragma once

// Exact coefficient fields. Three scalar types share one informal interface:
//
//   F::value_type           element type (regular value type, immutable usage)
//   f.zero(), f.one()       constants
//   f.from_int(n)           image of an integer
//   f.from_fraction(n, d)   image of n/d (d must be invertible in the field)
//   f.name()                "Q", "Fp:<p>", "Qq"
//   f.format(x)             canonical string; equal elements give identical strings
//   f.pivot_cost(x)         small number for cheap-to-divide-by elements
//
// Elements support + - * / and ==, and is_zero(x) is overloaded for each type.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qhh/errors.hpp"

namespace qhh {

// ---------------------------------------------------------------------------
// Rationals

using Rational = mpq_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

std::string format_rational(const Rational& x);
/// Parses "a", "-a", "a/b". Throws ParseError.
Rational parse_rational(const std::string& s);

struct RationalField {
  using value_type = Rational;

  value_type zero() const { return Rational(0); }
  value_type one() const { return Rational(1); }
  value_type from_int(long long n) const { return Rational(mpz_class(std::to_string(n))); }
  value_type from_fraction(const mpz_class& n, const mpz_class& d) const;
  std::string name() const { return "Q"; }
  std::string format(const value_type& x) const { return format_rational(x); }
  std::size_t pivot_cost(const value_type& x) const;
  bool operator==(const RationalField&) const = default;
};

// ---------------------------------------------------------------------------
// Prime fields

class ModP {
 public:
  ModP() = default;
  ModP(std::int64_t v, std::uint32_t p);

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  ModP inverse() const;

  friend ModP operator+(ModP a, ModP b) {
    const std::uint32_t p = a.p_ ? a.p_ : b.p_;
    std::uint64_t s = std::uint64_t(a.v_) + b.v_;
    if (p && s >= p) s -= p;
    return raw(std::uint32_t(s), p);
  }
  friend ModP operator-(ModP a) { return raw(a.v_ ? a.p_ - a.v_ : 0, a.p_); }
  friend ModP operator-(ModP a, ModP b) { return a + (-b); }
  friend ModP operator*(ModP a, ModP b) {
    const std::uint32_t p = a.p_ ? a.p_ : b.p_;
    if (!p) return {};
    return raw(std::uint32_t((std::uint64_t(a.v_) * b.v_) % p), p);
  }
  friend ModP operator/(ModP a, ModP b) { return a * b.inverse(); }
  ModP& operator+=(ModP o) { return *this = *this + o; }
  ModP& operator-=(ModP o) { return *this = *this - o; }
  ModP& operator*=(ModP o) { return *this = *this * o; }
  ModP& operator/=(ModP o) { return *this = *this / o; }
  // A default-constructed ModP is the zero of whatever field it meets.
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }

 private:
  static ModP raw(std::uint32_t v, std::uint32_t p) {
    ModP r;
    r.v_ = v;
    r.p_ = p;
    return r;
  }
  std::uint32_t v_ = 0;
  std::uint32_t p_ = 0;
};

inline bool is_zero(const ModP& x) { return x.value() == 0; }

bool is_prime(std::uint64_t n);

struct PrimeField {
  using value_type = ModP;

  /// Throws PreconditionError unless p is a prime below 2^31.
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p;

  value_type zero() const { return ModP(0, p); }
  value_type one() const { return ModP(1, p); }
  value_type from_int(long long n) const { return ModP(n, p); }
  value_type from_fraction(const mpz_class& n, const mpz_class& d) const;
  std::string name() const { return "Fp:" + std::to_string(p); }
  std::string format(const value_type& x) const { return std::to_string(x.value()); }
  std::size_t pivot_cost(const value_type&) const { return 0; }
  bool operator==(const PrimeField&) const = default;
};

// ---------------------------------------------------------------------------
// Polynomials in q over Q, and the field Q(q)

/// Dense univariate polynomial over Q, coefficients low to high, no trailing zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(Rational c);
  static Polynomial monomial(Rational c, std::size_t k);

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return int(c_.size()) - 1; }
  const Rational& lead() const { return c_.back(); }
  /// Order of vanishing at q = 0; 0 for the zero polynomial.
  std::size_t valuation() const;
  bool is_monomial() const;
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& s) const;
  /// Euclidean division; throws on division by zero.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;
  /// Exact quotient (asserts zero remainder in debug).
  Polynomial exact_div(const Polynomial& d) const;
  Polynomial monic() const;
  Rational evaluate(const Rational& x) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::string format() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Monic gcd (zero if both are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Reduced fraction num/den with den monic. Zero is 0/1.
class RatFunc {
 public:
  RatFunc() : den_(Rational(1)) {}
  explicit RatFunc(Rational c) : num_(std::move(c)), den_(Rational(1)) {}
  /// Reduces to canonical form; throws PreconditionError for a zero denominator.
  RatFunc(Polynomial num, Polynomial den);

  static RatFunc q() { return RatFunc(Polynomial::monomial(1, 1), Polynomial(Rational(1))); }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  RatFunc inverse() const;
  /// Substitutes a rational value for q; throws if q is a pole.
  Rational evaluate(const Rational& x) const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  friend bool operator==(const RatFunc&, const RatFunc&) = default;

  std::string format() const;

 private:
  struct Canonical {};
  RatFunc(Polynomial num, Polynomial den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}
  Polynomial num_;
  Polynomial den_;
};

inline bool is_zero(const RatFunc& x) { return x.is_zero(); }

struct RationalFunctionField {
  using value_type = RatFunc;

  value_type zero() const { return RatFunc(); }
  value_type one() const { return RatFunc(Rational(1)); }
  value_type from_int(long long n) const { return RatFunc(RationalField{}.from_int(n)); }
  value_type from_fraction(const mpz_class& n, const mpz_class& d) const {
    return RatFunc(RationalField{}.from_fraction(n, d));
  }
  /// The transcendental generator.
  value_type q() const { return RatFunc::q(); }
  std::string name() const { return "Qq"; }
  std::string format(const value_type& x) const { return x.format(); }
  std::size_t pivot_cost(const value_type& x) const;
  bool operator==(const RationalFunctionField&) const = default;
};

// ---------------------------------------------------------------------------
// Field selection and the parameter q

struct FieldSpec {
  enum class Kind { rationals, prime, rational_functions };
  Kind kind = Kind::rationals;
  std::uint32_t p = 0;

  /// "Q", "Fp:<p>", "Qq". Throws ParseError, or PreconditionError for non-prime p.
  static FieldSpec parse(const std::string& s);
  std::string name() const;
};

/// Calls fn(field) with the concrete field object selected by spec.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
  switch (spec.kind) {
    case FieldSpec::Kind::prime:
      return fn(PrimeField(spec.p));
    case FieldSpec::Kind::rational_functions:
      return fn(RationalFunctionField{});
    case FieldSpec::Kind::rationals:
    default:
      return fn(RationalField{});
  }
}

/// The q value requested on the command line: the generator of Q(q), or a rational number.
struct QSpec {
  bool generic = false;
  mpz_class num = 1;
  mpz_class den = 1;

  /// "generic", "<int>", "<num>/<den>". Throws ParseError.
  static QSpec parse(const std::string& s);
  std::string name() const;
};

/// Realizes a QSpec in a field. Throws PreconditionError if q = 0 there or if generic q
/// is requested outside Q(q).
template <class F>
typename F::value_type make_q(const F& field, const QSpec& spec) {
  typename F::value_type q;
  if (spec.generic) {
    if constexpr (requires { field.q(); }) {
      q = field.q();
    } else {
      throw PreconditionError("generic q requires the field Qq");
    }
  } else {
    q = field.from_fraction(spec.num, spec.den);
  }
  if (is_zero(q)) throw PreconditionError("q must be invertible");
  return q;
}

/// q^k for any integer k.
template <class F>
typename F::value_type q_power(const F& field, const typename F::value_type& q, long long k) {
  if (is_zero(q)) throw PreconditionError("q must be invertible");
  using T = typename F::value_type;
  T base = k < 0 ? field.one() / q : q;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  T result = field.one();
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

/// Memoized q^k used by twisting and the q-twisted Hochschild face.
template <class F>
class QPowers {
 public:
  using T = typename F::value_type;
  QPowers(F field, T q) : field_(std::move(field)), q_(std::move(q)) {
    if (is_zero(q_)) throw PreconditionError("q must be invertible");
  }
  const T& operator()(long long k) {
    auto it = cache_.find(k);
    if (it == cache_.end()) it = cache_.emplace(k, q_power(field_, q_, k)).first;
    return it->second;
  }
  const T& q() const { return q_; }

 private:
  F field_;
  T q_;
  std::map<long long, T> cache_;
};

}  // namespace qhh
