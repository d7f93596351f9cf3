#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "entrank/criteria.hpp"
#include "entrank/ef_optimizer.hpp"

namespace entrank::cli {

inline constexpr const char* kToolName = "entrank";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kUpperBoundCaveat =
    "value is an upper bound on the entanglement of formation: it is achieved by the reported ensemble, "
    "and a better ensemble may exist";

nlohmann::json to_json(const CriterionReport& r);
nlohmann::json to_json(const EfResult& r, bool include_ensemble = true);
nlohmann::json to_json(const AdditivityTable& t);
nlohmann::json tolerances_json(const Tolerances& tol);

// Envelope shared by every report: tool, version, input hash, tolerances.
nlohmann::json report_envelope(const std::string& command, const std::string& input_hash, const Tolerances& tol);

void print_report(std::ostream& out, const CriterionReport& r);
void print_ef(std::ostream& out, const EfResult& r, std::optional<double> oracle);
void print_additivity(std::ostream& out, const AdditivityTable& t);

}  // namespace entrank::cli
