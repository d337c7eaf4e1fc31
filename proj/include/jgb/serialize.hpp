#pragma once

#include <string>

#include "json.hpp"

#include "jgb/bounds.hpp"
#include "jgb/distribution.hpp"
#include "jgb/envelope.hpp"
#include "jgb/function.hpp"
#include "jgb/oracle.hpp"
#include "jgb/tightness.hpp"

namespace jgb::io {

using Json = nlohmann::ordered_json;

/// Parses text as JSON; syntax errors become Error(rejected_input) naming
/// `what` and the byte offset.
Json parse_json(const std::string& text, const std::string& what);

/// {"kind": "log", "mu": 1, "domain": [0.5, null], "shift": 1 | "auto"}.
/// A null lower end is -inf, a null upper end +inf.
FunctionSpec parse_function(const Json& j, const std::string& path = "function");

/// {"variant": "discrete", "points": [[x, p], ...]} and the other variants,
/// including two_point, three_point and spike constructions.
DistributionSpec parse_distribution(const Json& j, const std::string& path = "dist");

/// Shortest decimal with at most 9 significant digits; "inf", "-inf", "nan".
std::string format_number(double v);

/// Rounded to 9 significant digits; non-finite values become strings.
Json number(double v);

Json to_json(const ValidationReport& r);
Json to_json(const MomentValue& m);
Json to_json(const EnvelopeConstant& m);
Json to_json(const BoundReport& r);
Json to_json(const GapEstimate& g);
Json to_json(const VerifyResult& v);
Json to_json(const TwoPointEquality& t);
Json to_json(const ThreePointBlowup& t);
Json to_json(const LowerExponentSequence& s);

std::string bound_csv_header();
/// kind,value,lo,hi,loose,uncertainty,M,gap,gap_error,verdict
std::string bound_csv_row(const BoundReport& r, const GapEstimate& g, const VerifyResult& v);

}  // namespace jgb::io
