#include "dopt/zoo.hpp"

#include <stdexcept>

#include "dopt/synthesis.hpp"

namespace dopt {

namespace {

using RF = RationalFunction<Rational>;
using Poly = Polynomial<Rational>;
using PM = PartitionedMatrix<Rational>;

Poly poly(std::vector<Rational> c) { return Poly(std::move(c)); }

RF rf(std::vector<Rational> num, std::vector<Rational> den) {
  return RF(poly(std::move(num)), poly(std::move(den)));
}

// -alpha/(z-1)
RF gradient_opt(const Rational& a) { return rf({-a}, {-1, 1}); }
// -alpha z/(z-1)
RF proximal_opt(const Rational& a) { return rf({0, -a}, {-1, 1}); }
// -alpha((1+gamma)z - gamma)/((z-1)(z-beta))
RF accelerated_opt(const Rational& a, const Rational& b, const Rational& g) {
  return rf({a * g, -a * (1 + g)}, {b, -(1 + b), 1});
}

Rational get(const Params& p, const std::string& key, const Rational& dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

void require_positive(const std::string& name, const Rational& v) {
  if (v <= 0)
    throw Error("parameter " + name + " must be positive");
}

PM scalar_estimator(RF g12, RF g22, std::string label) {
  PM G(1, std::move(label));
  G.b11 = RF::one();
  G.b12(0, 0) = std::move(g12);
  G.b21(0, 0) = RF::one();
  G.b22(0, 0) = std::move(g22);
  return G;
}

// Printed DIGing transfer matrix, channel order (x-broadcast, y-tracker).
PM diging_h(const Rational& a) {
  PM H(2, "diging");
  H.b11 = rf({-a}, {-1, 1});
  H.b12(0, 0) = rf({0, -1}, {-1, 1});
  H.b12(0, 1) = rf({0, a}, {1, -2, 1});
  H.b21(0, 0) = rf({-a}, {0, -1, 1});
  H.b21(1, 0) = rf({1}, {0, 1});
  H.b22(0, 0) = rf({-1}, {-1, 1});
  H.b22(0, 1) = rf({a}, {1, -2, 1});
  H.b22(1, 1) = rf({-1}, {-1, 1});
  return H;
}

// DIGing estimator after dividing out g_opt, before any gauge change.
PM diging_estimator_raw(const Rational& a) {
  PM G(2, "diging_estimator");
  G.b11 = RF::one();
  G.b12(0, 0) = rf({0, -1}, {-1, 1});
  G.b12(0, 1) = rf({0, a}, {1, -2, 1});
  G.b21(0, 0) = rf({1}, {0, 1});
  G.b21(1, 0) = rf({-1, 1}, {0, -a});
  G.b22(0, 0) = rf({-1}, {-1, 1});
  G.b22(0, 1) = rf({a}, {1, -2, 1});
  G.b22(1, 1) = rf({-1}, {-1, 1});
  return G;
}

// Acceleration-family first factor [[1, g/alpha], [1, g/alpha]].
PM accel_factor(const RF& g_opt, const Rational& a) {
  RF e = RF::constant(Rational(1) / a) * g_opt;
  return scalar_estimator(e, e, "accel_factor");
}

struct Defaults {
  Kind kind;
  Params params;
  std::string provenance;
};

const std::map<std::string, Defaults>& defaults() {
  static const std::map<std::string, Defaults> d = {
      {"gradient", {Kind::OptMethod, {{"alpha", Rational(1, 10)}}, "gradient descent"}},
      {"proximal", {Kind::OptMethod, {{"alpha", Rational(1, 2)}}, "proximal point method"}},
      {"heavyball",
       {Kind::OptMethod,
        {{"alpha", Rational(1, 10)}, {"beta", Rational(1, 2)}},
        "heavy-ball momentum (gamma = 0)"}},
      {"nesterov",
       {Kind::OptMethod,
        {{"alpha", Rational(1, 10)}, {"beta", Rational(1, 2)}},
        "Nesterov acceleration (gamma = beta)"}},
      {"accelerated",
       {Kind::OptMethod,
        {{"alpha", Rational(1, 10)},
         {"beta", Rational(1, 2)},
         {"gamma", Rational(1, 2)}},
        "general accelerated method"}},
      {"eq2_estimator", {Kind::Estimator, {}, "first-order estimator, integrator form"}},
      {"eq2z_estimator",
       {Kind::Estimator, {}, "first-order estimator, delay-free network term"}},
      {"diging_estimator",
       {Kind::Estimator, {{"alpha", Rational(1, 10)}}, "DIGing estimator, raw gauge"}},
      {"diging_estimator_transformed",
       {Kind::Estimator, {}, "DIGing estimator after diag(z, -az/(z-1)) gauge"}},
      {"extra_estimator", {Kind::Estimator, {}, "EXTRA estimator"}},
      {"nids_estimator", {Kind::Estimator, {}, "NIDS estimator"}},
      {"exact_diffusion_estimator", {Kind::Estimator, {}, "Exact Diffusion estimator"}},
      {"svl_estimator", {Kind::Estimator, {{"beta", Rational(2, 5)}}, "SVL estimator"}},
      {"ab_estimator", {Kind::Estimator, {}, "AB estimator (eq2z then eq2 cascade)"}},
      {"abm_estimator",
       {Kind::Estimator,
        {{"alpha", Rational(1, 10)}, {"beta", Rational(1, 2)}},
        "ABm estimator (heavy-ball factor then eq2)"}},
      {"abn_estimator",
       {Kind::Estimator,
        {{"alpha", Rational(1, 10)}, {"beta", Rational(1, 2)}},
        "ABN estimator (Nesterov factor then eq2)"}},
      {"augdgm_estimator",
       {Kind::Estimator, {}, "AugDGM estimator (eq2z twice, factored form only)"}},
      {"diging", {Kind::Algorithm, {{"alpha", Rational(1, 10)}}, "DIGing"}},
      {"extra", {Kind::Algorithm, {{"alpha", Rational(1, 10)}}, "EXTRA"}},
      {"nids", {Kind::Algorithm, {{"alpha", Rational(1, 10)}}, "NIDS"}},
      {"exact_diffusion",
       {Kind::Algorithm, {{"alpha", Rational(1, 10)}}, "Exact Diffusion"}},
      {"svl",
       {Kind::Algorithm,
        {{"alpha", Rational(1, 10)}, {"beta", Rational(2, 5)}},
        "SVL"}},
      {"ab", {Kind::Algorithm, {{"alpha", Rational(1, 10)}}, "AB"}},
      {"abm",
       {Kind::Algorithm,
        {{"alpha", Rational(1, 10)}, {"beta", Rational(1, 2)}},
        "ABm (heavy-ball)"}},
      {"abn",
       {Kind::Algorithm,
        {{"alpha", Rational(1, 10)}, {"beta", Rational(1, 2)}},
        "ABN (Nesterov)"}},
      {"augdgm",
       {Kind::Algorithm, {{"alpha", Rational(1, 10)}}, "AugDGM (factored form only)"}},
  };
  return d;
}

}  // namespace

PM eq2_estimator() {
  return scalar_estimator(rf({-1}, {-1, 1}), rf({-1}, {-1, 1}), "eq2");
}

PM eq2z_estimator() {
  return scalar_estimator(rf({0, -1}, {-1, 1}), rf({-1}, {-1, 1}), "eq2z");
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& [name, d] : defaults()) names.push_back(name);
  return names;
}

CatalogEntry catalog_get(const std::string& name, const Params& overrides) {
  auto it = defaults().find(name);
  if (it == defaults().end()) throw Error("unknown catalog entry: " + name);

  CatalogEntry e;
  e.name = name;
  e.kind = it->second.kind;
  e.params = it->second.params;
  e.provenance = it->second.provenance;
  for (const auto& [k, v] : overrides) {
    if (e.params.find(k) == e.params.end())
      throw Error("entry " + name + " has no parameter " + k);
    e.params[k] = v;
  }
  const Rational a = get(e.params, "alpha", Rational(1, 10));
  const Rational b = get(e.params, "beta", Rational(1, 2));
  if (e.params.count("alpha")) require_positive("alpha", a);
  if (e.params.count("beta") && name != "svl" && name != "svl_estimator")
    require_positive("beta", b);

  if (name == "gradient") {
    e.opt = gradient_opt(a);
  } else if (name == "proximal") {
    e.opt = proximal_opt(a);
  } else if (name == "heavyball") {
    e.opt = accelerated_opt(a, b, Rational(0));
  } else if (name == "nesterov") {
    e.opt = accelerated_opt(a, b, b);
  } else if (name == "accelerated") {
    e.opt = accelerated_opt(a, b, get(e.params, "gamma", Rational(1, 2)));
  } else if (name == "eq2_estimator") {
    e.tf = eq2_estimator();
    e.estimator_order = 1;
  } else if (name == "eq2z_estimator") {
    e.tf = eq2z_estimator();
    e.estimator_order = 1;
  } else if (name == "diging_estimator") {
    e.tf = diging_estimator_raw(a);
    e.estimator_order = 2;
  } else if (name == "diging_estimator_transformed") {
    e.tf = compose_factors(eq2_estimator(), eq2_estimator(), name);
    e.estimator_order = 2;
  } else if (name == "extra_estimator") {
    e.tf = scalar_estimator(rf({Rational(1, 2), -1}, {1, -2, 1}),
                            rf({Rational(1, 2), -1}, {1, -2, 1}), name);
    e.estimator_order = 2;
  } else if (name == "nids_estimator") {
    e.tf = scalar_estimator(rf({0, 0, Rational(-1, 2)}, {1, -2, 1}),
                            rf({Rational(-1, 2), 1, -1}, {1, -2, 1}), name);
    e.estimator_order = 2;
  } else if (name == "exact_diffusion_estimator") {
    e.tf = scalar_estimator(rf({0, 0, Rational(-1, 2)}, {1, -2, 1}),
                            rf({Rational(1, 2), -1}, {1, -2, 1}), name);
    e.estimator_order = 2;
  } else if (name == "svl_estimator") {
    e.tf = scalar_estimator(rf({0, 1 - b, -1}, {1, -2, 1}),
                            rf({1, -(1 + b)}, {1, -2, 1}), name);
    e.estimator_order = 2;
  } else if (name == "ab_estimator") {
    e.tf = compose_factors(eq2z_estimator(), eq2_estimator(), name);
    e.factored = FactoredTriple{RF::one(), eq2z_estimator(), eq2_estimator()};
    e.estimator_order = 2;
  } else if (name == "abm_estimator" || name == "abn_estimator") {
    RF g = accelerated_opt(a, b, name == "abm_estimator" ? Rational(0) : b);
    PM f1 = accel_factor(g, a);
    e.tf = compose_factors(f1, eq2_estimator(), name);
    e.factored = FactoredTriple{RF::one(), f1, eq2_estimator()};
    e.estimator_order = 2;
  } else if (name == "augdgm_estimator") {
    e.factored = FactoredTriple{RF::one(), eq2z_estimator(), eq2z_estimator()};
    e.estimator_order = 2;
    e.monolithic_causal = false;
  } else if (name == "diging") {
    e.tf = diging_h(a);
    e.factored =
        FactoredTriple{gradient_opt(a), eq2_estimator(), eq2_estimator()};
  } else if (name == "extra" || name == "nids" || name == "exact_diffusion" ||
             name == "svl") {
    Params est_params;
    if (name == "svl") est_params["beta"] = b;
    CatalogEntry est = catalog_get(name + "_estimator", est_params);
    e.tf = compose(gradient_opt(a), *est.tf, name);
  } else if (name == "ab") {
    e.tf = compose(gradient_opt(a),
                   compose_factors(eq2z_estimator(), eq2_estimator()), name);
    e.factored =
        FactoredTriple{gradient_opt(a), eq2z_estimator(), eq2_estimator()};
  } else if (name == "abm" || name == "abn") {
    RF g = accelerated_opt(a, b, name == "abm" ? Rational(0) : b);
    PM f1 = accel_factor(g, a);
    e.tf = compose(g, compose_factors(f1, eq2_estimator()), name);
    e.factored = FactoredTriple{g, f1, eq2_estimator()};
  } else if (name == "augdgm") {
    e.factored =
        FactoredTriple{gradient_opt(a), eq2z_estimator(), eq2z_estimator()};
    e.monolithic_causal = false;
  }

  if (e.kind == Kind::OptMethod) {
    RootReport zr =
        e.opt->num().degree() > 0 ? roots(e.opt->num()) : RootReport{};
    e.minimum_phase = zr.all_inside_open_disk || e.opt->num().degree() == 0;
  }
  if (e.tf) e.tf->label = name;
  return e;
}

std::vector<Certificate> catalog_selftest() {
  std::vector<Certificate> certs;
  for (const std::string& name : catalog_names()) {
    CatalogEntry e = catalog_get(name);
    switch (e.kind) {
      case Kind::OptMethod:
        certs.push_back(check_optimization_method(*e.opt, default_eps_grid(), name));
        break;
      case Kind::Estimator:
        if (e.tf) {
          certs.push_back(check_consensus_estimator(
              *e.tf, e.estimator_order, default_lambda_radius(), false, name));
        } else {
          certs.push_back(check_consensus_estimator(
              e.factored->g_con1, 1, default_lambda_radius(), false,
              name + ".factor1"));
          certs.push_back(check_consensus_estimator(
              e.factored->g_con2, 1, default_lambda_radius(), false,
              name + ".factor2"));
        }
        break;
      case Kind::Algorithm:
        if (e.tf) {
          certs.push_back(check_distributed_algorithm(
              *e.tf, default_eps_grid(), default_lambda_radius(), false, name));
        } else {
          certs.push_back(check_optimization_method(
              e.factored->g_opt, default_eps_grid(), name + ".g_opt"));
          certs.push_back(check_consensus_estimator(
              e.factored->g_con1, 1, default_lambda_radius(), false,
              name + ".factor1"));
          certs.push_back(check_consensus_estimator(
              e.factored->g_con2, 1, default_lambda_radius(), false,
              name + ".factor2"));
        }
        break;
    }
  }
  return certs;
}

}  // namespace dopt
