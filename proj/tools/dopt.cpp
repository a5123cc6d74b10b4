// dopt: catalog browsing, lemma certification, decomposition/composition,
// estimator factoring, and closed-loop simulation from the command line.
//
// Exit codes: 0 pass, 1 fail, 2 refused/inconclusive, 3 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "dopt/oracle.hpp"
#include "dopt/serialize.hpp"
#include "dopt/synthesis.hpp"
#include "dopt/zoo.hpp"

namespace {

using namespace dopt;

constexpr const char* kVersion = "0.1.0";

json g_config = json::object();  // --config file contents, flag fallbacks

struct RunConfig {
  std::string command;
  json args = json::object();
};

json run_config_json(const RunConfig& rc) {
  return {{"tool", "dopt"},
          {"version", kVersion},
          {"command", rc.command},
          {"args", rc.args},
          {"grid_profile", std::getenv("DOPT_GRID_PROFILE")
                               ? std::getenv("DOPT_GRID_PROFILE")
                               : "default"}};
}

bool full_disk_profile() {
  const char* p = std::getenv("DOPT_GRID_PROFILE");
  if (p && std::string(p) == "full-disk") return true;
  return g_config.value("full_disk", false);
}

Rational config_radius() {
  if (g_config.contains("lambda_radius"))
    return rational_from_string(g_config["lambda_radius"].get<std::string>());
  return default_lambda_radius();
}

std::vector<Rational> config_eps_grid() {
  if (!g_config.contains("eps_grid")) return default_eps_grid();
  std::vector<Rational> g;
  for (const auto& v : g_config["eps_grid"])
    g.push_back(rational_from_string(v.get<std::string>()));
  return g;
}

// Write-then-rename so partial output never lands under the final name.
void atomic_write(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw Error("cannot open " + tmp + " for writing");
    os << data;
  }
  std::filesystem::rename(tmp, path);
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    atomic_write(out_path, text);
}

Params parse_params(const std::vector<std::string>& kvs) {
  Params p;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error("parameter must look like name=value: " + kv);
    p[kv.substr(0, eq)] = rational_from_string(kv.substr(eq + 1));
  }
  return p;
}

CatalogEntry load_entry(const std::string& zoo_name, const std::string& file,
                        const std::vector<std::string>& params,
                        const std::string& kind_hint = "") {
  if (!zoo_name.empty()) return catalog_get(zoo_name, parse_params(params));
  if (file.empty()) throw Error("provide --zoo or --file");
  std::ifstream is(file);
  if (!is) throw Error("cannot read " + file);
  json j = json::parse(is);
  CatalogEntry e;
  e.name = j.value("label", file);
  if (j.contains("b11")) {
    e.tf = partitioned_from_json(j);
    e.kind = kind_hint == "estimator" ? Kind::Estimator : Kind::Algorithm;
    e.estimator_order = 2;
  } else {
    e.opt = rf_from_json(j);
    e.kind = Kind::OptMethod;
  }
  return e;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Refused: return 2;
  }
  return 3;
}

void render_certificate(const Certificate& c) {
  std::cout << c.subject << ": " << to_string(c.verdict) << "\n";
  for (const auto& cond : c.conditions) {
    std::cout << "  " << cond.id << "  " << (cond.passed ? "pass" : "FAIL");
    if (!cond.evidence.empty()) std::cout << "  (" << cond.evidence << ")";
    std::cout << "\n";
  }
}

int cmd_verify(const std::string& zoo_name, const std::string& file,
               const std::vector<std::string>& params, std::string kind,
               int order, const std::string& out) {
  CatalogEntry e = load_entry(zoo_name, file, params, kind);
  if (kind.empty()) kind = to_string(e.kind);
  const Rational radius = config_radius();
  const bool full = full_disk_profile();

  std::vector<Certificate> certs;
  if (kind == "opt-method" || kind == "opt") {
    certs.push_back(check_optimization_method(*e.opt, config_eps_grid(), e.name));
  } else if (kind == "estimator") {
    const int ord = order > 0 ? order : e.estimator_order;
    if (e.tf) {
      certs.push_back(check_consensus_estimator(*e.tf, ord, radius, full, e.name));
    } else {
      certs.push_back(check_consensus_estimator(e.factored->g_con1, 1, radius,
                                                full, e.name + ".factor1"));
      certs.push_back(check_consensus_estimator(e.factored->g_con2, 1, radius,
                                                full, e.name + ".factor2"));
    }
  } else if (kind == "algorithm") {
    if (e.tf) {
      certs.push_back(check_distributed_algorithm(*e.tf, config_eps_grid(),
                                                  radius, full, e.name));
    } else {
      certs.push_back(check_optimization_method(
          e.factored->g_opt, config_eps_grid(), e.name + ".g_opt"));
      certs.push_back(check_consensus_estimator(e.factored->g_con1, 1, radius,
                                                full, e.name + ".factor1"));
      certs.push_back(check_consensus_estimator(e.factored->g_con2, 1, radius,
                                                full, e.name + ".factor2"));
    }
  } else {
    throw Error("unknown kind: " + kind);
  }

  Verdict worst = Verdict::Pass;
  json arr = json::array();
  for (const auto& c : certs) {
    render_certificate(c);
    arr.push_back(to_json(c));
    if (c.verdict == Verdict::Refused)
      worst = Verdict::Refused;
    else if (c.verdict == Verdict::Fail && worst == Verdict::Pass)
      worst = Verdict::Fail;
  }
  RunConfig rc{"verify", {{"target", e.name}, {"kind", kind}, {"order", order}}};
  if (!out.empty())
    emit({{"run_config", run_config_json(rc)}, {"certificates", arr}}, out);
  return verdict_exit(worst);
}

int cmd_zoo(const std::string& sub, const std::string& name,
            const std::vector<std::string>& params, const std::string& out) {
  if (sub == "list") {
    for (const auto& n : catalog_names()) {
      CatalogEntry e = catalog_get(n);
      std::cout << n << "  [" << to_string(e.kind) << "]  " << e.provenance
                << "\n";
    }
    return 0;
  }
  CatalogEntry e = catalog_get(name, parse_params(params));
  json j = {{"name", e.name},
            {"kind", to_string(e.kind)},
            {"provenance", e.provenance},
            {"monolithic_causal", e.monolithic_causal}};
  json ps = json::object();
  for (const auto& [k, v] : e.params) ps[k] = rational_to_string(v);
  j["params"] = ps;
  if (e.opt) j["g_opt"] = to_json(*e.opt);
  if (e.tf) j["tf"] = to_json(*e.tf);
  if (e.factored) {
    j["factored"] = {{"g_opt", to_json(e.factored->g_opt)},
                     {"g_con1", to_json(e.factored->g_con1)},
                     {"g_con2", to_json(e.factored->g_con2)}};
  }
  if (e.kind == Kind::Estimator) j["order"] = e.estimator_order;
  RunConfig rc{"zoo show", {{"name", name}}};
  j["run_config"] = run_config_json(rc);
  emit(j, out);
  return 0;
}

int cmd_decompose(const std::string& zoo_name, const std::string& file,
                  const std::vector<std::string>& params,
                  const std::string& out) {
  CatalogEntry e = load_entry(zoo_name, file, params);
  if (!e.tf) throw RefusalError(e.name + " has no causal monolithic form");
  Decomposition<Rational> d = decompose(*e.tf);
  json j = to_json(d);
  j["g_opt_certificate"] =
      to_json(check_optimization_method(d.g_opt, config_eps_grid()));
  j["g_con_certificate"] = to_json(check_consensus_estimator(
      d.g_con, 2, config_radius(), full_disk_profile()));
  RunConfig rc{"decompose", {{"target", e.name}}};
  j["run_config"] = run_config_json(rc);
  emit(j, out);
  return 0;
}

int cmd_compose(const std::string& opt_name, const std::string& con_name,
                const std::vector<std::string>& params,
                const std::string& out) {
  CatalogEntry o = catalog_get(opt_name, parse_params(params));
  CatalogEntry c = catalog_get(con_name);
  if (!o.opt) throw Error(opt_name + " is not an optimization method");
  if (!c.tf) throw RefusalError(con_name + " has no causal monolithic form");
  PartitionedMatrix<Rational> H =
      compose(*o.opt, *c.tf, opt_name + "+" + con_name);
  json j = to_json(H);
  j["certificate"] = to_json(check_distributed_algorithm(
      H, config_eps_grid(), config_radius(), full_disk_profile()));
  RunConfig rc{"compose", {{"opt", opt_name}, {"con", con_name}}};
  j["run_config"] = run_config_json(rc);
  emit(j, out);
  return verdict_exit(
      check_distributed_algorithm(H, config_eps_grid(), config_radius())
          .verdict);
}

int cmd_factor(const std::string& zoo_name, const std::string& file,
               const std::vector<std::string>& params, const std::string& split,
               bool search, const std::string& out) {
  CatalogEntry e = load_entry(zoo_name, file, params, "estimator");
  if (!e.tf) throw RefusalError(e.name + " has no causal monolithic form");
  int m1 = 1, m2 = 1;
  if (!split.empty()) {
    if (std::sscanf(split.c_str(), "%d,%d", &m1, &m2) != 2)
      throw Error("--split must look like m1,m2");
  }
  RunConfig rc{"factor",
               {{"target", e.name}, {"split", split}, {"search", search}}};
  json j = {{"run_config", run_config_json(rc)}};

  if (m1 + m2 != e.tf->m) {
    j["result"] = "failed";
    j["reason"] = "channel split does not match m=" + std::to_string(e.tf->m);
    emit(j, out);
    return 1;
  }
  FactorResult<Rational> r = try_factor(*e.tf, m1, m2);
  if (auto* ok = std::get_if<Factoring<Rational>>(&r)) {
    j["result"] = "factored";
    j["factoring"] = to_json(*ok);
    emit(j, out);
    return 0;
  }
  if (search) {
    const Rational alpha = e.params.count("alpha") ? e.params.at("alpha")
                                                   : Rational(1, 10);
    auto found = search_factoring_transform(
        *e.tf, m1, m2, default_f_entries<Rational>(alpha));
    if (found) {
      j["result"] = "factored";
      j["f_applied"] = to_json(found->f);
      j["factoring"] = to_json(found->factoring);
      emit(j, out);
      return 0;
    }
    j["result"] = "inconclusive";
    j["reason"] = "no member of the default gauge family factors this "
                  "estimator; this does not prove it cannot factor";
    emit(j, out);
    return 2;
  }
  j["result"] = "failed";
  j["reason"] = std::get<FactorFailure>(r).reason;
  emit(j, out);
  return 1;
}

int cmd_simulate(const std::string& zoo_name,
                 const std::vector<std::string>& params,
                 const std::string& topology, int n, double scale,
                 unsigned seed, double eps, int T, bool ramp_inputs,
                 const std::string& csv, const std::string& out) {
  CatalogEntry e = catalog_get(zoo_name, parse_params(params));
  Network net = build_network(topology_from_string(topology), n, scale, seed);
  RunConfig rc{"simulate",
               {{"target", zoo_name},
                {"topology", topology},
                {"n", n},
                {"scale", scale},
                {"seed", seed},
                {"eps", eps},
                {"T", T},
                {"ramp_inputs", ramp_inputs}}};
  json j = {{"run_config", run_config_json(rc)}};

  Trajectory tr;
  double target = 0.0;
  if (e.kind == Kind::Algorithm) {
    std::vector<double> ystar;
    for (int i = 1; i <= n; ++i) ystar.push_back(static_cast<double>(i));
    Objective obj = Objective::quadratic(eps, ystar);
    target = obj.target_mean();
    tr = e.tf ? simulate_distributed(convert_partitioned<double>(*e.tf), net,
                                     obj, T)
              : simulate_distributed_fig2(
                    convert_rf<double>(e.factored->g_opt),
                    convert_partitioned<double>(e.factored->g_con1),
                    convert_partitioned<double>(e.factored->g_con2), net, obj,
                    T);
  } else if (e.kind == Kind::Estimator) {
    PolynomialInputs w;
    w.coeffs = Eigen::MatrixXd::Zero(n, ramp_inputs ? 2 : 1);
    for (int i = 0; i < n; ++i) w.coeffs(i, 0) = i + 1.0;
    if (ramp_inputs)
      for (int i = 0; i < n; ++i) w.coeffs(i, 1) = (i % 2 == 0 ? 1.0 : -1.0);
    target = w.mean();
    tr = e.tf ? simulate_consensus(convert_partitioned<double>(*e.tf), net, w, T)
              : simulate_consensus_factored(
                    convert_partitioned<double>(e.factored->g_con1),
                    convert_partitioned<double>(e.factored->g_con2), net, w, T);
  } else {
    Objective obj = Objective::quadratic(eps, {3.0});
    target = 3.0;
    tr = simulate_optimization(convert_rf<double>(*e.opt), obj, T);
  }
  if (!csv.empty()) atomic_write(csv, tr.to_csv());
  j["final_error"] = tr.final_error(target);
  j["target"] = target;
  j["converged"] = tr.final_error(target) < 1e-6;
  emit(j, out);
  return 0;
}

int cmd_compare(const std::string& zoo_name,
                const std::vector<std::string>& params, int n, double scale,
                double eps, int T, const std::string& out) {
  CatalogEntry e = catalog_get(zoo_name, parse_params(params));
  if (!e.tf) throw RefusalError(zoo_name + " has no causal monolithic form");
  Network net = build_network(Topology::Ring, n, scale);
  std::vector<double> ystar;
  for (int i = 1; i <= n; ++i) ystar.push_back(static_cast<double>(i));
  Objective obj = Objective::tanh(eps, ystar);

  Decomposition<Rational> d = decompose(*e.tf);
  PartitionedMatrix<Rational> round = compose(d.g_opt, d.g_con);
  Trajectory a =
      simulate_distributed(convert_partitioned<double>(*e.tf), net, obj, T);
  Trajectory b =
      simulate_distributed(convert_partitioned<double>(round), net, obj, T);
  const double dev = (a.y - b.y).cwiseAbs().maxCoeff();
  RunConfig rc{"compare", {{"target", zoo_name}, {"n", n}, {"T", T}}};
  emit({{"run_config", run_config_json(rc)},
        {"max_trajectory_deviation", dev},
        {"agree", dev < 1e-8}},
       out);
  return dev < 1e-8 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed-optimization decomposition toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config overriding grids");

  // common option storage
  std::string zoo_name, file, kind, out, split, topology = "ring", csv;
  std::vector<std::string> params;
  std::string zoo_sub, opt_name, con_name;
  int order = 0, n = 5, T = 100000;
  double scale = kDefaultLaplacianScale, eps = 0.01;
  unsigned seed = 0;
  bool search = false, ramp = false;

  auto* zoo = app.add_subcommand("zoo", "list or show catalog entries");
  zoo->add_option("action", zoo_sub, "list | show")->required();
  zoo->add_option("name", zoo_name, "entry name (for show)");
  zoo->add_option("--param", params, "name=value overrides");
  zoo->add_option("--out", out, "write JSON here");

  auto* verify = app.add_subcommand("verify", "run a lemma certificate");
  verify->add_option("--zoo", zoo_name, "catalog entry");
  verify->add_option("--file", file, "JSON transfer object");
  verify->add_option("--kind", kind, "opt-method | estimator | algorithm");
  verify->add_option("--order", order, "estimator order");
  verify->add_option("--param", params, "name=value overrides");
  verify->add_option("--out", out, "write JSON here");

  auto* dec = app.add_subcommand("decompose", "Theorem 1 decomposition");
  dec->add_option("--zoo", zoo_name)->required(false);
  dec->add_option("--file", file);
  dec->add_option("--param", params);
  dec->add_option("--out", out);

  auto* comp = app.add_subcommand("compose", "Theorem 2 composition");
  comp->add_option("--opt", opt_name)->required();
  comp->add_option("--con", con_name)->required();
  comp->add_option("--param", params);
  comp->add_option("--out", out);

  auto* fac = app.add_subcommand("factor", "factor a second-order estimator");
  fac->add_option("--zoo", zoo_name);
  fac->add_option("--file", file);
  fac->add_option("--split", split, "m1,m2 channel split");
  fac->add_flag("--search", search, "search the default gauge family");
  fac->add_option("--param", params);
  fac->add_option("--out", out);

  auto* sim = app.add_subcommand("simulate", "closed-loop simulation");
  sim->add_option("--zoo", zoo_name)->required();
  sim->add_option("--topology", topology);
  sim->add_option("--n", n);
  sim->add_option("--scale", scale);
  sim->add_option("--seed", seed);
  sim->add_option("--eps", eps);
  sim->add_option("--T", T);
  sim->add_flag("--ramp-inputs", ramp);
  sim->add_option("--param", params);
  sim->add_option("--csv", csv, "trajectory CSV path");
  sim->add_option("--out", out);

  auto* cmp = app.add_subcommand("compare", "monolithic vs round-trip run");
  cmp->add_option("--zoo", zoo_name)->required();
  cmp->add_option("--n", n);
  cmp->add_option("--scale", scale);
  cmp->add_option("--eps", eps);
  cmp->add_option("--T", T);
  cmp->add_option("--param", params);
  cmp->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;  // usage problems map to exit 3
  }

  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw Error("cannot read config " + config_path);
      g_config = json::parse(is);
    }
    if (zoo->parsed()) return cmd_zoo(zoo_sub, zoo_name, params, out);
    if (verify->parsed())
      return cmd_verify(zoo_name, file, params, kind, order, out);
    if (dec->parsed()) return cmd_decompose(zoo_name, file, params, out);
    if (comp->parsed()) return cmd_compose(opt_name, con_name, params, out);
    if (fac->parsed())
      return cmd_factor(zoo_name, file, params, split, search, out);
    if (sim->parsed())
      return cmd_simulate(zoo_name, params, topology, n, scale, seed, eps, T,
                          ramp, csv, out);
    if (cmp->parsed()) return cmd_compare(zoo_name, params, n, scale, eps, T, out);
  } catch (const RefusalError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
