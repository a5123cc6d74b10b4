#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dopt {

// Exact rational scalar. All structural checks (multiplicities at z=1,
// entrywise equality) run in this mode.
using Rational = boost::multiprecision::cpp_rational;

using Cplx = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegreeCapError : Error {
  using Error::Error;
};
struct ImproperError : Error {
  using Error::Error;
};
struct StructuralSingularityError : Error {
  using Error::Error;
};
// Raised when an operation refuses a degenerate input (e.g. unit-circle
// zeros) rather than guessing.
struct RefusalError : Error {
  using Error::Error;
};
struct AlgebraicLoopError : Error {
  using Error::Error;
};

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Complex extension of an arbitrary field. std::complex is only specified
// for floating-point types, and we need exact Gaussian rationals for
// complex lambda samples and all-pass intermediates.
template <class T>
struct Gauss {
  T re{};
  T im{};

  Gauss() = default;
  Gauss(T r) : re(std::move(r)) {}  // NOLINT: implicit by design
  Gauss(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  bool operator==(const Gauss&) const = default;

  Gauss operator-() const { return {-re, -im}; }
  friend Gauss operator+(const Gauss& a, const Gauss& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Gauss operator-(const Gauss& a, const Gauss& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Gauss operator*(const Gauss& a, const Gauss& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Gauss operator/(const Gauss& a, const Gauss& b) {
    T n = b.re * b.re + b.im * b.im;
    if (n == 0) throw Error("division by zero Gauss scalar");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Gauss& operator+=(const Gauss& b) { return *this = *this + b; }
  Gauss& operator-=(const Gauss& b) { return *this = *this - b; }
  Gauss& operator*=(const Gauss& b) { return *this = *this * b; }
  Gauss& operator/=(const Gauss& b) { return *this = *this / b; }
};

using CRational = Gauss<Rational>;

template <class K>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool real = true;
  using complex_type = CRational;
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool negligible(const Rational& x, double /*scale*/) { return x == 0; }
  static Cplx to_cplx(const Rational& x) { return {to_double(x), 0.0}; }
  static double mag(const Rational& x) { return std::abs(to_double(x)); }
};

template <>
struct scalar_traits<CRational> {
  static constexpr bool exact = true;
  static constexpr bool real = false;
  using complex_type = CRational;
  static bool is_zero(const CRational& x) { return x.re == 0 && x.im == 0; }
  static bool negligible(const CRational& x, double) { return is_zero(x); }
  static Cplx to_cplx(const CRational& x) {
    return {to_double(x.re), to_double(x.im)};
  }
  static double mag(const CRational& x) { return std::abs(to_cplx(x)); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr bool real = true;
  using complex_type = Cplx;
  static bool is_zero(double x) { return x == 0.0; }
  static bool negligible(double x, double scale) {
    return std::abs(x) <= 1e-12 * scale;
  }
  static Cplx to_cplx(double x) { return {x, 0.0}; }
  static double mag(double x) { return std::abs(x); }
};

template <>
struct scalar_traits<Cplx> {
  static constexpr bool exact = false;
  static constexpr bool real = false;
  using complex_type = Cplx;
  static bool is_zero(const Cplx& x) { return x == Cplx{0.0, 0.0}; }
  static bool negligible(const Cplx& x, double scale) {
    return std::abs(x) <= 1e-12 * scale;
  }
  static Cplx to_cplx(const Cplx& x) { return x; }
  static double mag(const Cplx& x) { return std::abs(x); }
};

template <class K>
using complex_of = typename scalar_traits<K>::complex_type;

// Scalar conversions between coefficient fields (exact -> exact-complex,
// exact -> floating, real -> complex).
template <class To>
To scalar_cast(const Rational& x) {
  if constexpr (std::is_same_v<To, Rational>) return x;
  else if constexpr (std::is_same_v<To, CRational>) return CRational(x);
  else if constexpr (std::is_same_v<To, double>) return to_double(x);
  else return Cplx(to_double(x), 0.0);
}
template <class To>
To scalar_cast(const CRational& x) {
  if constexpr (std::is_same_v<To, CRational>) return x;
  else if constexpr (std::is_same_v<To, Cplx>)
    return {to_double(x.re), to_double(x.im)};
  else if constexpr (std::is_same_v<To, Rational>) {
    if (x.im != 0) throw Error("complex scalar has no real representation");
    return x.re;
  } else {
    if (x.im != 0) throw Error("complex scalar has no real representation");
    return to_double(x.re);
  }
}
template <class To>
To scalar_cast(double x) {
  if constexpr (std::is_same_v<To, double>) return x;
  else if constexpr (std::is_same_v<To, Cplx>) return Cplx(x, 0.0);
  else static_assert(std::is_same_v<To, double> || std::is_same_v<To, Cplx>,
                     "no exact conversion from double");
}
template <class To>
To scalar_cast(const Cplx& x) {
  if constexpr (std::is_same_v<To, Cplx>) return x;
  else if constexpr (std::is_same_v<To, double>) {
    if (x.imag() != 0) throw Error("complex scalar has no real representation");
    return x.real();
  } else
    static_assert(std::is_same_v<To, Cplx> || std::is_same_v<To, double>,
                  "no exact conversion from complex double");
}

// Parses "p/q", plain integers, and decimal literals like "-0.25" or
// "1.5e-3" into an exact rational.
Rational rational_from_string(const std::string& s);

std::string rational_to_string(const Rational& x);

}  // namespace dopt
