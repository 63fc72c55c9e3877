#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "expolat/diffops.hpp"
#include "expolat/error.hpp"
#include "expolat/exppoly.hpp"
#include "expolat/montel.hpp"
#include "expolat/oracle.hpp"
#include "expolat/recover.hpp"
#include "expolat/subspace.hpp"

// JSON forms of library values. Field order is fixed (insertion order), so
// equal values always serialize to identical text.
//
// Scalars are pairs [re, im]: exact parts as rational strings ("3", "-1/2"),
// float parts as JSON numbers. On input, a pair of strings or of JSON
// integers is exact; any non-integer number makes the scalar float.

namespace expolat::json {

using Json = nlohmann::ordered_json;

Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);

Json to_json(const LatticePoint& p);
LatticePoint point_from_json(const Json& j);
std::vector<LatticePoint> points_from_json(const Json& j);

Json to_json(const MultiIndex& a);
MultiIndex multi_index_from_json(const Json& j);

Json to_json(const ExponentialWitness& w);
ExponentialWitness witness_from_json(const Json& j);

/// {"dim": d, "terms": [{"lambda": [...], "coeffs": [{"alpha": [...], "c": [re, im]}]}]}
Json to_json(const ExpPoly& f);
ExpPoly exppoly_from_json(const Json& j);

/// {"factors": [{"lambda": [...]} or {"phi": [{"y": [...], "value": [re, im]}]},
///              "shift": [...], "power": p]}
Json to_json(const DiffProduct& p);
DiffProduct product_from_json(const Json& j);

Json to_json(const PhiTable& t);
PhiTable phi_table_from_json(const Json& j);

/// {"dim": d, "lo": [...], "hi": [...], "values": [[re, im], ...]} row-major.
Json to_json(const SampledFunction& s);
SampledFunction sampled_from_json(const Json& j);

/// {"dim": k, "basis": [ExpPoly, ...]}
Json to_json(const SpanSpace& v);
SpanSpace span_from_json(const Json& j);

/// Row-major entries plus the graded-lex monomial order of rows/columns.
Json to_json(const OperatorMatrix& m, const GradedLexBasis& basis);

Json to_json(const MontelCertificate& c);
Json to_json(const std::vector<std::optional<unsigned>>& orders);
Json to_json(const WitnessCandidates& w);
Json to_json(const MinimalityReport& r);
Json to_json(const ExtendResult& r);
Json to_json(const ChainResult& r);
Json to_json(const Root& r);
Json to_json(const Decomposition& d);
Json to_json(const oracle::FrechetResult& r);

Json error_json(ErrorCode code, const std::string& detail);

/// Parses text; malformed input throws Error(parse_error).
Json parse(const std::string& text);

}  // namespace expolat::json
