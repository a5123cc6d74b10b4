#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "dopt/ratpoly.hpp"

namespace dopt {

// Poles with modulus in [1 - kStabilityMargin, 1] are reported unstable;
// conservative on the strict open-unit-disk definition.
inline constexpr double kStabilityMargin = 1e-9;
// Floating-mode ambiguity band around |z| = 1. Zeros inside the band are
// refused rather than classified.
inline constexpr double kOnCircleBand = 1e-7;

struct Root {
  Cplx z;
  int multiplicity = 1;
};

struct RootReport {
  std::vector<Root> roots;
  double max_modulus = 0.0;
  bool all_inside_open_disk = true;
  std::vector<Cplx> on_circle;
};

namespace detail {

inline RootReport report_from(const std::vector<Cplx>& raw) {
  RootReport rep;
  std::vector<bool> taken(raw.size(), false);
  for (size_t i = 0; i < raw.size(); ++i) {
    if (taken[i]) continue;
    Root r{raw[i], 1};
    const double tol = 1e-7 * std::max(1.0, std::abs(raw[i]));
    for (size_t j = i + 1; j < raw.size(); ++j) {
      if (!taken[j] && std::abs(raw[j] - raw[i]) <= tol) {
        taken[j] = true;
        ++r.multiplicity;
      }
    }
    rep.roots.push_back(r);
  }
  for (const Root& r : rep.roots) {
    const double m = std::abs(r.z);
    rep.max_modulus = std::max(rep.max_modulus, m);
    if (std::abs(m - 1.0) < kOnCircleBand) rep.on_circle.push_back(r.z);
  }
  rep.all_inside_open_disk = rep.max_modulus < 1.0 - kStabilityMargin;
  return rep;
}

}  // namespace detail

// All complex roots with multiplicities. In exact mode, roots at z=1 and
// z=0 are stripped by exact divisibility first; only the remainder goes
// to the floating companion solver.
template <class K>
RootReport roots(const Polynomial<K>& p) {
  if (p.is_zero()) throw Error("roots of the zero polynomial");
  if (p.degree() == 0) return RootReport{};
  std::vector<Cplx> found;
  Polynomial<K> q = p;
  if constexpr (scalar_traits<K>::exact) {
    int k0 = 0;
    while (!q.is_zero() && scalar_traits<K>::is_zero(q.at(0))) {
      std::vector<K> c(q.coeffs().begin() + 1, q.coeffs().end());
      q = Polynomial<K>(std::move(c));
      ++k0;
    }
    for (int i = 0; i < k0; ++i) found.push_back(Cplx(0, 0));
    int k1 = q.root_multiplicity(K(1));
    for (int i = 0; i < k1; ++i) {
      q = divmod(q, Polynomial<K>({K(-1), K(1)})).first;
      found.push_back(Cplx(1, 0));
    }
  }
  auto rest = detail::float_roots(q);
  found.insert(found.end(), rest.begin(), rest.end());
  return detail::report_from(found);
}

template <class K>
std::pair<bool, RootReport> is_stable(const RationalFunction<K>& r) {
  if (r.den().degree() == 0) return {true, RootReport{}};
  RootReport rep = roots(r.den());
  return {rep.max_modulus < 1.0 - kStabilityMargin, rep};
}

template <class K>
struct AllpassResult {
  RationalFunction<K> phi;        // all-pass product, 1 when minimum-phase
  RationalFunction<K> corrected;  // phi * r, minimum-phase
};

namespace detail {

// Continued-fraction rational reconstruction of a floating root that is
// expected to be exactly rational.
inline std::optional<Rational> reconstruct_rational(double x) {
  const double tol = 1e-9 * std::max(1.0, std::abs(x));
  boost::multiprecision::cpp_int pprev = 0, p = 1;
  boost::multiprecision::cpp_int qprev = 1, q = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(v);
    if (std::abs(fl) > 1e15) return std::nullopt;
    boost::multiprecision::cpp_int a(static_cast<long long>(fl));
    boost::multiprecision::cpp_int pn = a * p + pprev;
    boost::multiprecision::cpp_int qn = a * q + qprev;
    pprev = p; p = pn;
    qprev = q; q = qn;
    if (q > boost::multiprecision::cpp_int(1000000000)) return std::nullopt;
    Rational cand(p, q);
    if (std::abs(to_double(cand) - x) <= tol) return cand;
    double rem = v - fl;
    if (rem < 1e-15) return std::nullopt;
    v = 1.0 / rem;
  }
  return std::nullopt;
}

}  // namespace detail

// Theorem-style all-pass correction: phi is the product of factors
// (1 - conj(z0) z)/(z - z0) over zeros z0 of r on or outside the unit
// circle; corrected = phi * r is minimum-phase. Zeros inside the
// on-circle ambiguity band are refused (the factor degenerates there).
template <class K>
AllpassResult<K> allpass_correction(const RationalFunction<K>& r) {
  AllpassResult<K> out{RationalFunction<K>::one(), r};
  if (r.is_zero() || r.num().degree() == 0) return out;
  RootReport zr = roots(r.num());
  if (!zr.on_circle.empty())
    throw RefusalError("all-pass correction refused: zero on the unit circle");

  Polynomial<K> phi_num = Polynomial<K>::one();
  Polynomial<K> phi_den = Polynomial<K>::one();
  std::vector<Root> outside;
  for (const Root& root : zr.roots)
    if (std::abs(root.z) > 1.0) outside.push_back(root);
  if (outside.empty()) return out;

  // Pair conjugates so every factor has real coefficients.
  std::vector<bool> used(outside.size(), false);
  for (size_t i = 0; i < outside.size(); ++i) {
    if (used[i]) continue;
    const Cplx z0 = outside[i].z;
    const int mult = outside[i].multiplicity;
    if (std::abs(z0.imag()) <= 1e-9 * std::max(1.0, std::abs(z0))) {
      Polynomial<K> fn, fd;
      if constexpr (scalar_traits<K>::exact) {
        auto r0 = detail::reconstruct_rational(z0.real());
        if (!r0 || r.num().root_multiplicity(scalar_cast<K>(*r0)) < mult)
          throw Error("cannot express all-pass zero exactly in rational mode");
        K e = scalar_cast<K>(*r0);
        fn = Polynomial<K>({K(1), -e});   // 1 - z0 z
        fd = Polynomial<K>({-e, K(1)});   // z - z0
      } else {
        K e = K(z0.real());
        fn = Polynomial<K>({K(1), -e});
        fd = Polynomial<K>({-e, K(1)});
      }
      for (int k = 0; k < mult; ++k) {
        phi_num = phi_num * fn;
        phi_den = phi_den * fd;
      }
    } else {
      // find the conjugate partner
      size_t j = i;
      for (size_t t = i + 1; t < outside.size(); ++t) {
        if (!used[t] &&
            std::abs(outside[t].z - std::conj(z0)) <
                1e-6 * std::max(1.0, std::abs(z0))) {
          j = t;
          break;
        }
      }
      if (j == i) throw Error("unpaired complex zero in all-pass correction");
      used[j] = true;
      const double s_f = 2.0 * z0.real();
      const double p_f = std::norm(z0);
      Polynomial<K> fn, fd;
      if constexpr (scalar_traits<K>::exact) {
        auto s = detail::reconstruct_rational(s_f);
        auto p = detail::reconstruct_rational(p_f);
        if (!s || !p)
          throw Error("cannot express all-pass pair exactly in rational mode");
        K se = scalar_cast<K>(*s), pe = scalar_cast<K>(*p);
        Polynomial<K> quad({pe, -se, K(1)});  // z^2 - s z + p
        if (!divmod(r.num(), quad).second.is_zero())
          throw Error("cannot express all-pass pair exactly in rational mode");
        fn = Polynomial<K>({K(1), -se, pe});  // p z^2 - s z + 1
        fd = quad;
      } else {
        K se = K(s_f), pe = K(p_f);
        fn = Polynomial<K>({K(1), -se, pe});
        fd = Polynomial<K>({pe, -se, K(1)});
      }
      for (int k = 0; k < mult; ++k) {
        phi_num = phi_num * fn;
        phi_den = phi_den * fd;
      }
    }
  }
  out.phi = RationalFunction<K>(std::move(phi_num), std::move(phi_den));
  out.corrected = out.phi * r;
  return out;
}

// Exact unit-modulus sample directions on the lambda disk (Pythagorean
// triples), so lambda-grid closures stay in exact arithmetic. The default
// is the positive real axis: the undirected topologies in scope have
// symmetric Laplacians with real nonnegative spectra, and the classic
// second-order estimators (double pole at z=1 splitting as 1±sqrt(-cλ))
// are unstable along every fixed non-real direction, however small the
// radius. Full-disk grids are available by flag for the stricter reading.
inline std::vector<CRational> lambda_directions(bool full_disk = false) {
  std::vector<CRational> dirs = {{Rational(1), Rational(0)}};
  if (full_disk) {
    std::vector<CRational> tilted = {
        {Rational(4, 5), Rational(3, 5)},   {Rational(4, 5), Rational(-3, 5)},
        {Rational(3, 5), Rational(4, 5)},   {Rational(3, 5), Rational(-4, 5)},
        {Rational(12, 13), Rational(5, 13)}, {Rational(12, 13), Rational(-5, 13)},
        {Rational(5, 13), Rational(12, 13)}, {Rational(5, 13), Rational(-12, 13)},
    };
    for (const auto& d : tilted) {
      dirs.push_back(d);
      dirs.push_back({-d.re, d.im});
    }
    dirs.push_back({Rational(-1), Rational(0)});
    dirs.push_back({Rational(0), Rational(1)});
    dirs.push_back({Rational(0), Rational(-1)});
  }
  return dirs;
}

inline std::vector<CRational> lambda_grid(const Rational& radius,
                                          bool full_disk = false) {
  std::vector<CRational> grid;
  for (int k = 1; k <= 4; ++k) {
    Rational r = radius * Rational(k, 4);
    for (const auto& d : lambda_directions(full_disk))
      grid.push_back({r * d.re, r * d.im});
  }
  return grid;
}

struct GridStabilityReport {
  bool stable = true;
  double min_margin = 1.0;  // 1 - worst pole modulus over the grid
  Cplx worst_lambda{0.0, 0.0};
  double worst_pole_modulus = 0.0;
  int samples = 0;
};

// Sampled certificate for "stable for all |lambda| < delta". `family`
// maps a lambda sample to the closed rational map at that sample.
template <class Lambda, class Family>
GridStabilityReport disk_grid_stability(Family&& family,
                                        const std::vector<Lambda>& grid) {
  GridStabilityReport rep;
  for (const Lambda& lam : grid) {
    auto closed = family(lam);
    ++rep.samples;
    double max_mod = 0.0;
    if (closed.den().degree() > 0)
      max_mod = roots(closed.den()).max_modulus;
    double margin = 1.0 - max_mod;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst_lambda = scalar_traits<Lambda>::to_cplx(lam);
      rep.worst_pole_modulus = max_mod;
    }
  }
  rep.stable = rep.min_margin > kStabilityMargin;
  return rep;
}

}  // namespace dopt
