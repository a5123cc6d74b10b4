#pragma once

#include <json.hpp>

#include "dopt/certify.hpp"
#include "dopt/stability.hpp"
#include "dopt/synthesis.hpp"
#include "dopt/tfmatrix.hpp"

namespace dopt {

using nlohmann::json;

// Interchange format: rational functions as {"num": [...], "den": [...],
// "mode": "rational"|"floating"} with exact "p/q" coefficient strings in
// rational mode.
json to_json(const RationalFunction<Rational>& r);
json to_json(const RationalFunction<double>& r);
RationalFunction<Rational> rf_from_json(const json& j);

json to_json(const RfMatrix<Rational>& m);
RfMatrix<Rational> matrix_from_json(const json& j);

json to_json(const PartitionedMatrix<Rational>& p);
PartitionedMatrix<Rational> partitioned_from_json(const json& j);

json to_json(const Certificate& c);
json to_json(const RootReport& r);
json to_json(const Decomposition<Rational>& d);
json to_json(const Factoring<Rational>& f);

}  // namespace dopt
