#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dopt/roots.hpp"
#include "dopt/scalar.hpp"

namespace dopt {

// Polynomials in z over a coefficient field K, coefficients stored in
// ascending degree. The zero polynomial has an empty coefficient vector
// and degree -1.
template <class K>
class Polynomial {
 public:
  // All paper systems have degree <= 4; anything near this cap is a
  // runaway-algebra bug, not a legitimate input.
  static constexpr int kDegreeCap = 64;

  Polynomial() = default;
  explicit Polynomial(std::vector<K> coeffs) : c_(std::move(coeffs)) {
    trim_();
    check_cap_();
  }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial constant(K v) { return Polynomial({std::move(v)}); }
  static Polynomial one() { return constant(K(1)); }
  // z^k
  static Polynomial monomial(int k, K lead = K(1)) {
    std::vector<K> c(static_cast<size_t>(k) + 1, K(0));
    c.back() = std::move(lead);
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<K>& coeffs() const { return c_; }
  K at(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : K(0);
  }
  K leading() const { return is_zero() ? K(0) : c_.back(); }

  bool operator==(const Polynomial&) const = default;

  template <class P>
  P eval(const P& x) const {
    P acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      acc = acc * x + scalar_cast<P>(*it);
    return acc;
  }

  Polynomial operator-() const {
    auto c = c_;
    for (auto& v : c) v = -v;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), K(0));
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.at(int(i)) + b.at(int(i));
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + (-b);
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    std::vector<K> c(a.c_.size() + b.c_.size() - 1, K(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const K& s, const Polynomial& p) {
    auto c = p.c_;
    for (auto& v : c) v = s * v;
    return Polynomial(std::move(c));
  }

  // Division with remainder over the field K.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a,
                                                  const Polynomial& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    std::vector<K> rem = a.c_;
    const int db = b.degree();
    if (a.degree() < db) return {zero(), a};
    std::vector<K> quo(a.degree() - db + 1, K(0));
    for (int i = a.degree(); i >= db; --i) {
      K q = rem[i] / b.c_.back();
      quo[i - db] = q;
      for (int j = 0; j <= db; ++j) rem[i - db + j] -= q * b.c_[j];
      rem[i] = K(0);
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
  }

  // Euclidean polynomial gcd; exact coefficient fields only.
  friend Polynomial gcd(Polynomial a, Polynomial b) {
    static_assert(scalar_traits<K>::exact,
                  "polynomial gcd requires exact coefficients");
    while (!b.is_zero()) {
      auto [q, r] = divmod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    if (a.is_zero()) return a;
    return (K(1) / a.leading()) * a;  // monic
  }

  // Exact multiplicity of root `r`; exact fields only.
  int root_multiplicity(const K& r) const {
    static_assert(scalar_traits<K>::exact, "exact root test only");
    Polynomial factor({-r, K(1)});
    Polynomial p = *this;
    int k = 0;
    while (!p.is_zero()) {
      auto [q, rem] = divmod(p, factor);
      if (!rem.is_zero()) break;
      ++k;
      p = std::move(q);
    }
    return k;
  }

  double coeff_scale() const {
    double s = 0.0;
    for (const auto& v : c_) s = std::max(s, scalar_traits<K>::mag(v));
    return s;
  }

 private:
  void trim_() {
    const double scale = coeff_scale();
    while (!c_.empty() && scalar_traits<K>::negligible(c_.back(), scale))
      c_.pop_back();
  }
  void check_cap_() const {
    if (degree() > kDegreeCap)
      throw DegreeCapError("polynomial degree " + std::to_string(degree()) +
                           " exceeds cap " + std::to_string(kDegreeCap));
  }
  std::vector<K> c_;
};

// Relative tolerance on root distance used when floating-mode
// canonicalization cancels near-common roots. The paper never addresses
// numerics; near-cancellations are logged, never silent.
inline constexpr double kDefaultCancelTol = 1e-9;

struct CancelLog {
  std::vector<Cplx> cancelled_roots;
};

namespace detail {

template <class K>
Polynomial<K> poly_from_roots(const std::vector<Cplx>& roots, const K& lead) {
  std::vector<Cplx> c{Cplx(1.0, 0.0)};
  for (const Cplx& r : roots) {
    std::vector<Cplx> next(c.size() + 1, Cplx(0.0, 0.0));
    for (size_t i = 0; i < c.size(); ++i) {
      next[i] -= r * c[i];
      next[i + 1] += c[i];
    }
    c = std::move(next);
  }
  std::vector<K> out(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    if constexpr (scalar_traits<K>::real)
      out[i] = lead * K(c[i].real());
    else
      out[i] = lead * scalar_cast<K>(c[i]);
  }
  return Polynomial<K>(std::move(out));
}

template <class K>
std::vector<Cplx> float_roots(const Polynomial<K>& p) {
  std::vector<Cplx> c(p.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = scalar_traits<K>::to_cplx(p.coeffs()[i]);
  return poly_roots(std::move(c));
}

}  // namespace detail

// Rational function num/den in z, canonical on construction: gcd-reduced
// with monic denominator (exact mode), or near-common roots cancelled
// within `cancel_tol` (floating mode).
template <class K>
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Polynomial<K>::one()) {}
  RationalFunction(Polynomial<K> num, Polynomial<K> den,
                   double cancel_tol = kDefaultCancelTol,
                   CancelLog* log = nullptr)
      : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("rational function with zero denominator");
    canonicalize_(cancel_tol, log);
  }

  static RationalFunction constant(K v) {
    return RationalFunction(Polynomial<K>::constant(std::move(v)),
                            Polynomial<K>::one());
  }
  static RationalFunction zero() { return RationalFunction(); }
  static RationalFunction one() { return constant(K(1)); }
  // z^k for any integer k
  static RationalFunction z_power(int k) {
    if (k >= 0)
      return RationalFunction(Polynomial<K>::monomial(k),
                              Polynomial<K>::one());
    return RationalFunction(Polynomial<K>::one(), Polynomial<K>::monomial(-k));
  }

  const Polynomial<K>& num() const { return num_; }
  const Polynomial<K>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  // den degree minus num degree; the zero function counts as infinitely
  // strictly proper.
  int relative_degree() const {
    if (is_zero()) return kInfiniteRelDegree;
    return den_.degree() - num_.degree();
  }
  static constexpr int kInfiniteRelDegree = 1 << 20;
  bool is_proper() const { return relative_degree() >= 0; }
  bool is_strictly_proper() const { return relative_degree() >= 1; }

  bool operator==(const RationalFunction&) const = default;

  template <class P>
  P eval(const P& x) const {
    return num_.template eval<P>(x) / den_.template eval<P>(x);
  }
  Cplx eval_cplx(const Cplx& z) const {
    Cplx n(0, 0), d(0, 0);
    for (auto it = num_.coeffs().rbegin(); it != num_.coeffs().rend(); ++it)
      n = n * z + scalar_traits<K>::to_cplx(*it);
    for (auto it = den_.coeffs().rbegin(); it != den_.coeffs().rend(); ++it)
      d = d * z + scalar_traits<K>::to_cplx(*it);
    return n / d;
  }

  RationalFunction operator-() const {
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  friend RationalFunction operator+(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_,
                            a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a,
                                    const RationalFunction& b) {
    return a + (-b);
  }
  friend RationalFunction operator*(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a,
                                    const RationalFunction& b) {
    if (b.is_zero()) throw Error("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction inverse() const {
    return RationalFunction::one() / *this;
  }

  // Signed multiplicity at z=1: k>0 for a zero of multiplicity k, k<0 for
  // a pole of multiplicity |k|. Exact in rational mode, tolerance-gated in
  // floating mode.
  int pole_zero_multiplicity_at_one(double tol = 1e-7) const {
    if (is_zero()) return 0;
    if constexpr (scalar_traits<K>::exact) {
      return num_.root_multiplicity(K(1)) - den_.root_multiplicity(K(1));
    } else {
      return float_mult_(num_, tol) - float_mult_(den_, tol);
    }
  }

  // First `count` coefficients of the expansion in powers of z^{-1}
  // (Markov parameters). Requires a proper function.
  std::vector<K> series_coeffs(int count) const {
    if (!is_proper()) throw ImproperError("series expansion of improper function");
    std::vector<K> out(static_cast<size_t>(count), K(0));
    if (is_zero()) return out;
    const int shift = relative_degree();
    const int na = num_.degree(), nb = den_.degree();
    // Reversed-coefficient power series division in w = 1/z.
    auto N = [&](int j) { return j <= na ? num_.at(na - j) : K(0); };
    auto D = [&](int j) { return j <= nb ? den_.at(nb - j) : K(0); };
    std::vector<K> q;
    for (int k = 0; k + shift < count; ++k) {
      K v = N(k);
      for (int j = 1; j <= k; ++j) v -= D(j) * q[k - j];
      q.push_back(v / D(0));
      out[k + shift] = q.back();
    }
    return out;
  }

 private:
  static int float_mult_(const Polynomial<K>& p, double tol) {
    Polynomial<K> q = p;
    int k = 0;
    while (!q.is_zero()) {
      K v = q.template eval<K>(K(1));
      if (scalar_traits<K>::mag(v) > tol * std::max(1.0, q.coeff_scale()))
        break;
      // synthetic division by (z - 1)
      std::vector<K> c(q.coeffs().size() > 1 ? q.coeffs().size() - 1 : 0);
      K carry(0);
      for (int i = q.degree(); i >= 1; --i) {
        carry = q.at(i) + carry;
        c[i - 1] = carry;
      }
      q = Polynomial<K>(std::move(c));
      ++k;
    }
    return k;
  }

  void canonicalize_(double cancel_tol, CancelLog* log) {
    if (num_.is_zero()) {
      den_ = Polynomial<K>::one();
      return;
    }
    if constexpr (scalar_traits<K>::exact) {
      Polynomial<K> g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
      }
    } else {
      cancel_float_(cancel_tol, log);
      if (num_.is_zero()) {
        den_ = Polynomial<K>::one();
        return;
      }
    }
    K lead = den_.leading();
    num_ = (K(1) / lead) * num_;
    den_ = (K(1) / lead) * den_;
  }

  void cancel_float_(double tol, CancelLog* log) {
    if (num_.degree() < 1 || den_.degree() < 1) return;
    auto zn = detail::float_roots(num_);
    auto zd = detail::float_roots(den_);
    std::vector<bool> used(zn.size(), false);
    std::vector<Cplx> kept_den;
    std::vector<Cplx> cancelled;
    for (const Cplx& d : zd) {
      int best = -1;
      double best_dist = tol * std::max(1.0, std::abs(d));
      for (size_t i = 0; i < zn.size(); ++i) {
        if (used[i]) continue;
        double dist = std::abs(zn[i] - d);
        if (dist <= best_dist) {
          best_dist = dist;
          best = static_cast<int>(i);
        }
      }
      if (best >= 0) {
        used[best] = true;
        cancelled.push_back(d);
      } else {
        kept_den.push_back(d);
      }
    }
    if (cancelled.empty()) return;
    std::vector<Cplx> kept_num;
    for (size_t i = 0; i < zn.size(); ++i)
      if (!used[i]) kept_num.push_back(zn[i]);
    num_ = detail::poly_from_roots(kept_num, num_.leading());
    den_ = detail::poly_from_roots(kept_den, den_.leading());
    if (log)
      log->cancelled_roots.insert(log->cancelled_roots.end(),
                                  cancelled.begin(), cancelled.end());
  }

  Polynomial<K> num_;
  Polynomial<K> den_;
};

enum class RfOp { Add, Sub, Mul, Div };

template <class K>
RationalFunction<K> rf_arith(const RationalFunction<K>& a,
                             const RationalFunction<K>& b, RfOp op) {
  switch (op) {
    case RfOp::Add: return a + b;
    case RfOp::Sub: return a - b;
    case RfOp::Mul: return a * b;
    case RfOp::Div: return a / b;
  }
  throw Error("bad RfOp");
}

template <class K>
RationalFunction<K> rf_canonicalize(const RationalFunction<K>& r,
                                    double cancel_tol = kDefaultCancelTol,
                                    CancelLog* log = nullptr) {
  return RationalFunction<K>(r.num(), r.den(), cancel_tol, log);
}

template <class To, class From>
Polynomial<To> convert_poly(const Polynomial<From>& p) {
  std::vector<To> c(p.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = scalar_cast<To>(p.coeffs()[i]);
  return Polynomial<To>(std::move(c));
}

template <class To, class From>
RationalFunction<To> convert_rf(const RationalFunction<From>& r) {
  return RationalFunction<To>(convert_poly<To>(r.num()),
                              convert_poly<To>(r.den()));
}

// Drops the imaginary part of a complex-coefficient result that is known
// to be real (conjugate contributions paired up); refuses otherwise.
template <class K>
RationalFunction<K> demote_real(const RationalFunction<complex_of<K>>& r) {
  return convert_rf<K>(r);
}

}  // namespace dopt
