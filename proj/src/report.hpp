#pragma once

#include <string>

#include <json.hpp>

#include "recurrence.hpp"
#include "simulate.hpp"
#include "verify.hpp"

namespace rotablue {

// JSON uses full precision; "pretty" rounds to 6 significant digits and
// mirrors the usual tabular presentation (a coefficients first, then the
// r vectors as columns). CSV is one row per (i, slot) of the r table.
//
// Partial solutions (an assumption failed) serialize whatever was computed
// up to the failure point; parsing such an object restores a partial
// solution. Restored solutions carry the recursion data (a, r, variance)
// and can drive estimation, but not the internal multiplier table.

nlohmann::ordered_json solution_to_json(const RecurrenceSolution& sol);
RecurrenceSolution solution_from_json(const std::string& text);
std::string solution_to_csv(const RecurrenceSolution& sol);
std::string solution_to_pretty(const RecurrenceSolution& sol);

nlohmann::ordered_json verification_to_json(const VerificationReport& rep);
std::string verification_to_csv(const VerificationReport& rep);
std::string verification_to_pretty(const VerificationReport& rep);

nlohmann::ordered_json simulation_to_json(const SimulationReport& rep);
std::string simulation_to_csv(const SimulationReport& rep);
std::string simulation_to_pretty(const SimulationReport& rep);

} // namespace rotablue
