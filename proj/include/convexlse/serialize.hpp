#pragma once

#include <string>

#include "json.hpp"

#include "convexlse/complexity.hpp"
#include "convexlse/estimation.hpp"
#include "convexlse/experiments.hpp"
#include "convexlse/sets.hpp"

namespace convexlse {

// Shortest round-trip decimal; infinities as "inf"/"-inf", NaN as "nan".
// Locale-independent.
std::string format_double(double v);

std::string to_csv(const ComplexityCurve& curve);
std::string to_csv(const SweepReport& report);

nlohmann::json to_json(const ProjectionResult& r);
nlohmann::json to_json(const TmuEstimate& est);
nlohmann::json to_json(const BracketVerdict& v);
nlohmann::json to_json(const RiskEstimate& r);
nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const ConcentrationRow& row);

// Writes bytes exactly as given (LF line endings preserved).
void write_file(const std::string& path, const std::string& contents);

}  // namespace convexlse
