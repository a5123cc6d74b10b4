#pragma once

#include "dopt/certify.hpp"
#include "dopt/netsim.hpp"
#include "dopt/zoo.hpp"

namespace dopt {

// Simulation-based checks of Definitions 1-3, independent of the
// transfer-function certifiers. Scenario defaults follow the desk-scale
// suite: quadratic objectives with eps = 0.01, ring networks with
// Laplacian scale 0.5.
struct OracleScenario {
  int ring_n = 5;
  double laplacian_scale = kDefaultLaplacianScale;
  double eps = 0.01;
  int horizon_opt = 30000;
  int horizon_estimator = 20000;
  int horizon_algorithm = 100000;
  double tol_opt = 1e-8;
  double tol_estimator = 1e-6;
  double tol_algorithm = 1e-6;
};

Certificate oracle_check_optimization(const RationalFunction<Rational>& g,
                                      const OracleScenario& sc = {},
                                      std::string subject = "opt oracle");

// Constant inputs for any order; additionally ramp inputs (constant mean)
// for order >= 2. Uses the factored arrangement when only that is causal.
Certificate oracle_check_estimator(const CatalogEntry& e,
                                   const OracleScenario& sc = {});

Certificate oracle_check_algorithm(const CatalogEntry& e,
                                   const OracleScenario& sc = {});

// Dispatch on the entry's kind.
Certificate oracle_check_definition(const CatalogEntry& e,
                                    const OracleScenario& sc = {});

}  // namespace dopt
