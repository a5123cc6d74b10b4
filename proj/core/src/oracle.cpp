#include "dopt/oracle.hpp"

#include <cmath>
#include <sstream>

namespace dopt {

namespace {

std::string err_str(double e, double tol) {
  std::ostringstream os;
  os << "final error " << e << " vs tolerance " << tol;
  return os.str();
}

}  // namespace

Certificate oracle_check_optimization(const RationalFunction<Rational>& g,
                                      const OracleScenario& sc,
                                      std::string subject) {
  Certificate cert;
  cert.subject = std::move(subject);
  auto gd = convert_rf<double>(g);
  try {
    Trajectory tr = simulate_optimization(
        gd, Objective::quadratic(sc.eps, {3.0}), sc.horizon_opt);
    const double e = tr.final_error(3.0);
    cert.add("D1.converges", std::isfinite(e) && e < sc.tol_opt,
             err_str(e, sc.tol_opt));

    // eps = 0: the iterate must settle to a constant.
    Trajectory z = simulate_optimization(gd, Objective::zero(), 1000);
    const double drift =
        std::abs(z.y(z.T - 1, 0) - z.y(z.T - 2, 0));
    cert.add("D1.constant_when_eps0", std::isfinite(drift) && drift < 1e-12,
             "final step drift " + std::to_string(drift));
  } catch (const Error& ex) {
    cert.verdict = Verdict::Refused;
    cert.add("D1.refusal", false, ex.what());
  }
  cert.finalize();
  return cert;
}

Certificate oracle_check_estimator(const CatalogEntry& e,
                                   const OracleScenario& sc) {
  Certificate cert;
  cert.subject = e.name + " oracle";
  const int n = 4;
  Network net = build_network(Topology::Ring, n, sc.laplacian_scale);

  auto run = [&](const PolynomialInputs& w, int T) {
    if (e.tf) {
      return simulate_consensus(convert_partitioned<double>(*e.tf), net, w, T);
    }
    return simulate_consensus_factored(
        convert_partitioned<double>(e.factored->g_con1),
        convert_partitioned<double>(e.factored->g_con2), net, w, T);
  };

  try {
    PolynomialInputs constant;
    constant.coeffs = Eigen::MatrixXd(n, 1);
    constant.coeffs << 1, 2, 3, 4;
    Trajectory tr = run(constant, sc.horizon_estimator);
    const double ec = tr.final_error(2.5);
    cert.add("D2.constant_inputs", std::isfinite(ec) && ec < sc.tol_estimator,
             err_str(ec, sc.tol_estimator));

    if (e.estimator_order >= 2) {
      PolynomialInputs ramp;
      ramp.coeffs = Eigen::MatrixXd(n, 2);
      ramp.coeffs << 1, 1, 2, -1, 3, 2, 4, -2;
      Trajectory tq = run(ramp, sc.horizon_estimator);
      const double er = tq.final_error(2.5);
      cert.add("D2.ramp_inputs", std::isfinite(er) && er < sc.tol_estimator,
               err_str(er, sc.tol_estimator));
    }
  } catch (const Error& ex) {
    cert.verdict = Verdict::Refused;
    cert.add("D2.refusal", false, ex.what());
  }
  cert.finalize();
  return cert;
}

Certificate oracle_check_algorithm(const CatalogEntry& e,
                                   const OracleScenario& sc) {
  Certificate cert;
  cert.subject = e.name + " oracle";
  Network net = build_network(Topology::Ring, sc.ring_n, sc.laplacian_scale);
  std::vector<double> ystar;
  for (int i = 1; i <= sc.ring_n; ++i) ystar.push_back(static_cast<double>(i));
  const Objective obj = Objective::quadratic(sc.eps, ystar);
  const double target = obj.target_mean();

  try {
    Trajectory tr =
        e.tf ? simulate_distributed(convert_partitioned<double>(*e.tf), net,
                                    obj, sc.horizon_algorithm)
             : simulate_distributed_fig2(
                   convert_rf<double>(e.factored->g_opt),
                   convert_partitioned<double>(e.factored->g_con1),
                   convert_partitioned<double>(e.factored->g_con2), net, obj,
                   sc.horizon_algorithm);
    const double err = tr.final_error(target);
    cert.add("D3.converges_to_mean",
             std::isfinite(err) && err < sc.tol_algorithm,
             err_str(err, sc.tol_algorithm));
  } catch (const Error& ex) {
    cert.verdict = Verdict::Refused;
    cert.add("D3.refusal", false, ex.what());
  }
  cert.finalize();
  return cert;
}

Certificate oracle_check_definition(const CatalogEntry& e,
                                    const OracleScenario& sc) {
  switch (e.kind) {
    case Kind::OptMethod:
      return oracle_check_optimization(*e.opt, sc, e.name + " oracle");
    case Kind::Estimator:
      return oracle_check_estimator(e, sc);
    case Kind::Algorithm:
      return oracle_check_algorithm(e, sc);
  }
  throw Error("bad catalog kind");
}

}  // namespace dopt
