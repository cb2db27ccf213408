#pragma once

// JSON file formats and canonical number printing.

#include <string>

#include "json.hpp"

#include "qw1/channels.hpp"
#include "qw1/classical_ot.hpp"
#include "qw1/inequality_lab.hpp"
#include "qw1/w1.hpp"

namespace qw1::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSignificantDigits = 12;

/// x rounded to 12 significant digits; non-finite values become null.
Json number(double x);
std::string format_number(double x);

/// Parses text; ParseError on malformed input.
Json parse(const std::string& text);
/// Reads and parses a file; ParseError if unreadable or malformed.
Json read_file(const std::string& path);

/// [[[re, im], ...], ...], row-major.
CMatrix matrix_from_json(const Json& j, const std::string& what);
Json matrix_to_json(const CMatrix& m);

/// {"d", "n", "matrix"}.
HermitianOperator operator_from_json(const Json& j, int cap = kDefaultDimCap);
DensityMatrix density_from_json(const Json& j, int cap = kDefaultDimCap);
Json operator_to_json(const HermitianOperator& x);

/// {"d", "n", "weights"}.
Distribution distribution_from_json(const Json& j, int cap = kDefaultDimCap);
Json distribution_to_json(const Distribution& p);

/// {"kind": "kraus" | "amplitude_damping" | "depolarizing", "d", "p", "omega", "kraus"}.
KrausChannel channel_from_json(const Json& j, int cap = kDefaultDimCap);
/// {"d", "n", "gates": [{"support", "unitary"}]}.
Circuit circuit_from_json(const Json& j, int cap = kDefaultDimCap);

Json certificate_to_json(const W1Certificate& c);
Json lipschitz_to_json(const LipschitzResult& r);
Json estimate_to_json(const LipschitzEstimate& e);
Json classical_to_json(const ClassicalW1& primal, const ClassicalW1Dual& dual, const BoundCheck& shannon);
Json contraction_to_json(const ContractionReport& r);
Json empirical_to_json(const EmpiricalContraction& e);
Json check_to_json(const CheckResult& r);

/// One compact JSON object per line: results in report order, then the summary.
std::string battery_to_jsonl(const BatteryReport& report);

/// Compact single-line dump with a trailing newline.
std::string dump_line(const Json& j);
/// Indented dump with a trailing newline.
std::string dump_pretty(const Json& j);

}  // namespace qw1::io
