#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dopt/certify.hpp"
#include "dopt/tfmatrix.hpp"

namespace dopt {

enum class Kind { OptMethod, Estimator, Algorithm };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::OptMethod: return "opt-method";
    case Kind::Estimator: return "estimator";
    case Kind::Algorithm: return "algorithm";
  }
  return "?";
}

// (g_opt, G_con1, G_con2) triple for entries the literature specifies in
// factored form. AB and AugDGM live here; AugDGM in particular has no
// causal monolithic transfer matrix (every gauge of the composed
// estimator leaves a direct feedthrough in the network channel), so its
// composed form would not satisfy the causality half of the estimator
// characterization and is never emitted.
struct FactoredTriple {
  RationalFunction<Rational> g_opt;
  PartitionedMatrix<Rational> g_con1;
  PartitionedMatrix<Rational> g_con2;
};

struct CatalogEntry {
  std::string name;
  Kind kind = Kind::Algorithm;
  std::map<std::string, Rational> params;

  std::optional<RationalFunction<Rational>> opt;      // Kind::OptMethod
  std::optional<PartitionedMatrix<Rational>> tf;      // monolithic form
  std::optional<FactoredTriple> factored;             // factored form

  int estimator_order = 0;       // Kind::Estimator only
  bool minimum_phase = false;    // Kind::OptMethod only
  bool monolithic_causal = true; // false: only the factored form is causal
  std::string provenance;
};

using Params = std::map<std::string, Rational>;

std::vector<std::string> catalog_names();
CatalogEntry catalog_get(const std::string& name, const Params& overrides = {});

// First-order estimator building blocks: eq2 = [[1, -1/(z-1)], [1, -1/(z-1)]]
// and its variant with the extra delay-free network term,
// eq2z = [[1, -z/(z-1)], [1, -1/(z-1)]].
PartitionedMatrix<Rational> eq2_estimator();
PartitionedMatrix<Rational> eq2z_estimator();

// Runs the matching certifier on every catalog entry at default
// parameters. Factored entries are certified factor-by-factor.
std::vector<Certificate> catalog_selftest();

}  // namespace dopt
