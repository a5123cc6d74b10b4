#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "dopt/stability.hpp"
#include "dopt/tfmatrix.hpp"

namespace dopt {

enum class Verdict { Pass, Fail, Refused };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Refused: return "refused";
  }
  return "?";
}

struct Condition {
  std::string id;
  bool passed = false;
  std::string evidence;
};

struct Certificate {
  std::string subject;
  Verdict verdict = Verdict::Pass;
  std::vector<Condition> conditions;
  std::vector<double> eps_grid;   // recorded grids, for reproducibility
  std::vector<Cplx> lambda_grid;
  double lambda_radius = 0.0;
  double margin_tolerance = kStabilityMargin;

  void add(std::string id, bool passed, std::string evidence = {}) {
    conditions.push_back({std::move(id), passed, std::move(evidence)});
  }
  void finalize() {
    if (verdict == Verdict::Refused) return;
    verdict = Verdict::Pass;
    for (const auto& c : conditions)
      if (!c.passed) verdict = Verdict::Fail;
  }
  bool passed() const { return verdict == Verdict::Pass; }
};

// Default quantifier grids. The paper quantifies "sufficiently small"
// without bounds; these defaults contain the worst catalog stepsizes and
// every grid in effect is recorded in the certificate.
inline std::vector<Rational> default_eps_grid() {
  std::vector<Rational> g;
  Rational e(1, 10);
  for (int i = 0; i < 6; ++i) {
    g.push_back(e);
    e /= 10;
  }
  return g;
}
inline Rational default_lambda_radius() { return Rational(3, 10); }

// Fixed generic nonzero lambda samples for structural (multiplicity)
// claims; the z=1 multiplicity is constant off a finite exceptional set,
// so three generic samples certify the quantifier with overwhelming
// probability.
inline std::vector<CRational> generic_lambdas() {
  return {{Rational(3, 10), Rational(1, 7)},
          {Rational(-1, 5), Rational(2, 9)},
          {Rational(7, 13), Rational(0)}};
}

namespace detail {

template <class K>
std::vector<K> eps_grid_as(const std::vector<Rational>& g) {
  std::vector<K> out;
  out.reserve(g.size());
  for (const auto& e : g) out.push_back(scalar_cast<K>(e));
  return out;
}

template <class CK>
std::vector<CK> lambda_grid_as(const Rational& radius, bool full_disk) {
  std::vector<CK> out;
  for (const auto& lam : lambda_grid(radius, full_disk)) {
    if constexpr (std::is_same_v<CK, CRational>)
      out.push_back(lam);
    else
      out.push_back(scalar_traits<CRational>::to_cplx(lam));
  }
  return out;
}

inline std::string cplx_str(const Cplx& z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// Zeros of 1 - eps*g, i.e. roots of den - eps*num.
template <class K>
RootReport small_gain_zeros(const RationalFunction<K>& g, const K& eps) {
  Polynomial<K> p = g.den() - Polynomial<K>::constant(eps) * g.num();
  if (p.is_zero() || p.degree() == 0) return RootReport{};
  return roots(p);
}

}  // namespace detail

// Lemma: a causal SISO LTI system is an optimization method iff (i) the
// zeros of 1 - eps*G(z) are inside the unit circle for small eps, (ii)
// G has a pole at z=1 with (z-1)G stable, and (iii) G is proper.
template <class K>
Certificate check_optimization_method(
    const RationalFunction<K>& g,
    const std::vector<Rational>& eps_grid = default_eps_grid(),
    std::string subject = "optimization method") {
  Certificate cert;
  cert.subject = std::move(subject);
  for (const auto& e : eps_grid) cert.eps_grid.push_back(to_double(e));

  bool i_ok = true;
  std::string i_ev;
  for (const K& eps : detail::eps_grid_as<K>(eps_grid)) {
    RootReport rep = detail::small_gain_zeros(g, eps);
    if (!rep.all_inside_open_disk) {
      i_ok = false;
      std::ostringstream os;
      os << "eps=" << scalar_traits<K>::mag(eps)
         << " zero modulus " << rep.max_modulus;
      i_ev = os.str();
      break;
    }
  }
  cert.add("L1.i", i_ok, i_ev);

  int mult = g.pole_zero_multiplicity_at_one();
  RationalFunction<K> zm1(Polynomial<K>({K(-1), K(1)}), Polynomial<K>::one());
  auto [stab, rep] = is_stable(zm1 * g);
  bool ii_ok = mult < 0 && stab;
  std::ostringstream ii_ev;
  ii_ev << "z=1 multiplicity " << mult << ", (z-1)G max pole modulus "
        << rep.max_modulus;
  cert.add("L1.ii", ii_ok, ii_ev.str());

  cert.add("L1.iii", g.is_proper(),
           "relative degree " + std::to_string(g.relative_degree()));
  cert.finalize();
  return cert;
}

// Lemma: consensus estimator of order ell iff (i) G_lambda stable on the
// small-lambda disk, (ii) G_0(1)=1, (iii) G_lambda has ell zeros at z=1
// for lambda != 0, (iv) G proper with G22 strictly proper.
template <class K>
Certificate check_consensus_estimator(
    const PartitionedMatrix<K>& G, int order,
    const Rational& radius = default_lambda_radius(), bool full_disk = false,
    std::string subject = "consensus estimator") {
  using CK = complex_of<K>;
  Certificate cert;
  cert.subject = std::move(subject);
  cert.lambda_radius = to_double(radius);
  auto grid = detail::lambda_grid_as<CK>(radius, full_disk);
  for (const auto& lam : grid)
    cert.lambda_grid.push_back(scalar_traits<CK>::to_cplx(lam));

  try {
    auto family = [&](const CK& lam) { return lft_eval(G, lam); };
    GridStabilityReport stab = disk_grid_stability(family, grid);
    std::ostringstream ev;
    ev << "min stability margin " << stab.min_margin << " at lambda "
       << detail::cplx_str(stab.worst_lambda) << " (" << stab.samples
       << " samples)";
    cert.add("L2.i", stab.stable, ev.str());

    // G_0(1) = 1, with the pole case failing rather than erroring.
    bool ii_ok = false;
    std::string ii_ev;
    if (G.b11.pole_zero_multiplicity_at_one() < 0) {
      ii_ev = "G0 has a pole at z=1";
    } else {
      K num1 = G.b11.num().template eval<K>(K(1));
      K den1 = G.b11.den().template eval<K>(K(1));
      K val = num1 / den1;
      if constexpr (scalar_traits<K>::exact)
        ii_ok = (val == K(1));
      else
        ii_ok = scalar_traits<K>::mag(val - K(1)) < 1e-9;
      ii_ev = "G0(1) deviation " +
              std::to_string(scalar_traits<K>::mag(val - K(1)));
    }
    cert.add("L2.ii", ii_ok, ii_ev);

    std::vector<CK> gen;
    for (const auto& lam : generic_lambdas()) gen.push_back(scalar_cast<CK>(lam));
    bool iii_ok = true;
    std::string iii_ev;
    for (const auto& [lam, mult] : lft_symbolic_numerator_scan(G, gen)) {
      if (mult != order) {
        iii_ok = false;
        iii_ev = "multiplicity " + std::to_string(mult) + " != " +
                 std::to_string(order) + " at lambda " +
                 detail::cplx_str(scalar_traits<CK>::to_cplx(lam));
        break;
      }
    }
    cert.add("L2.iii", iii_ok, iii_ev);

    PropernessReport prop = properness_report(G);
    cert.add("L2.iv", prop.matrix_proper && prop.b22_strictly_proper,
             prop.matrix_proper ? (prop.b22_strictly_proper
                                       ? "proper, G22 strictly proper"
                                       : "G22 not strictly proper")
                                : "improper block entry");
  } catch (const StructuralSingularityError& e) {
    cert.verdict = Verdict::Refused;
    cert.add("L2.refusal", false, e.what());
  }
  cert.finalize();
  return cert;
}

// Lemma: distributed optimization algorithm iff (i) zeros of
// 1 - eps*H_lambda inside the circle over the joint (eps, lambda) grid,
// (ii) H_0 has a pole at z=1 with (z-1)H_0 stable, (iii) H_lambda stable
// with a zero at z=1 for lambda != 0, (iv) properness structure.
template <class K>
Certificate check_distributed_algorithm(
    const PartitionedMatrix<K>& H,
    const std::vector<Rational>& eps_grid = default_eps_grid(),
    const Rational& radius = default_lambda_radius(), bool full_disk = false,
    std::string subject = "distributed algorithm") {
  using CK = complex_of<K>;
  Certificate cert;
  cert.subject = std::move(subject);
  cert.lambda_radius = to_double(radius);
  for (const auto& e : eps_grid) cert.eps_grid.push_back(to_double(e));
  auto grid = detail::lambda_grid_as<CK>(radius, full_disk);
  for (const auto& lam : grid)
    cert.lambda_grid.push_back(scalar_traits<CK>::to_cplx(lam));

  try {
    auto eps_ck = detail::eps_grid_as<CK>(eps_grid);

    // (i) full product grid, lambda = 0 included: the paper quantifies
    // eps and lambda simultaneously.
    bool i_ok = true;
    std::string i_ev;
    bool iii_ok = true;
    std::string iii_ev;
    std::vector<CK> closures_grid = grid;
    closures_grid.push_back(CK(0));
    for (const CK& lam : closures_grid) {
      RationalFunction<CK> h_lam = lft_eval(H, lam);
      if (i_ok) {
        for (const CK& eps : eps_ck) {
          RootReport rep = detail::small_gain_zeros(h_lam, eps);
          if (!rep.all_inside_open_disk) {
            i_ok = false;
            i_ev = "worst zero modulus " + std::to_string(rep.max_modulus) +
                   " at lambda " +
                   detail::cplx_str(scalar_traits<CK>::to_cplx(lam));
            break;
          }
        }
      }
      if (iii_ok && !scalar_traits<CK>::is_zero(lam)) {
        auto [stab, rep] = is_stable(h_lam);
        int mult = std::max(h_lam.pole_zero_multiplicity_at_one(), 0);
        if (!stab || mult < 1) {
          iii_ok = false;
          iii_ev = std::string(!stab ? "unstable" : "no zero at z=1") +
                   " at lambda " +
                   detail::cplx_str(scalar_traits<CK>::to_cplx(lam));
        }
      }
    }
    cert.add("L3.i", i_ok, i_ev);

    int mult0 = H.b11.pole_zero_multiplicity_at_one();
    RationalFunction<K> zm1(Polynomial<K>({K(-1), K(1)}),
                            Polynomial<K>::one());
    auto [stab0, rep0] = is_stable(zm1 * H.b11);
    std::ostringstream ii_ev;
    ii_ev << "z=1 multiplicity " << mult0 << ", (z-1)H0 max pole modulus "
          << rep0.max_modulus;
    cert.add("L3.ii", mult0 < 0 && stab0, ii_ev.str());

    // (iii) also at the generic structural samples
    if (iii_ok) {
      std::vector<CK> gen;
      for (const auto& lam : generic_lambdas())
        gen.push_back(scalar_cast<CK>(lam));
      for (const CK& lam : gen) {
        RationalFunction<CK> h_lam = lft_eval(H, lam);
        if (std::max(h_lam.pole_zero_multiplicity_at_one(), 0) < 1) {
          iii_ok = false;
          iii_ev = "no zero at z=1 at generic lambda";
          break;
        }
      }
    }
    cert.add("L3.iii", iii_ok, iii_ev);

    PropernessReport prop = properness_report(H);
    bool iv_ok = prop.matrix_proper && prop.b22_strictly_proper &&
                 prop.b21b12_strictly_proper;
    std::string iv_ev = !prop.matrix_proper ? "improper block entry"
                        : !prop.b22_strictly_proper
                            ? "H22 not strictly proper"
                        : !prop.b21b12_strictly_proper
                            ? "H21*H12 not strictly proper"
                            : "properness structure holds";
    cert.add("L3.iv", iv_ok, iv_ev);
  } catch (const StructuralSingularityError& e) {
    cert.verdict = Verdict::Refused;
    cert.add("L3.refusal", false, e.what());
  }
  cert.finalize();
  return cert;
}

}  // namespace dopt
