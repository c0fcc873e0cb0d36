#pragma once

#include <json.hpp>
#include <string>

#include "wiredsys/behavior/trajectory.hpp"
#include "wiredsys/contracts/static_contract.hpp"
#include "wiredsys/dsl/model.hpp"
#include "wiredsys/security/testing.hpp"

namespace wiredsys::dsl {

// Deterministic result rendering: object keys are sorted, floats use the
// shortest round-tripping decimal form.

nlohmann::json machine_json(const behavior::MooreMachine& m);
nlohmann::json system_json(const behavior::LTISystem& l);
nlohmann::json behavior_json(const security::Behavior& b);
nlohmann::json contract_json(const contracts::StaticContract& c);
nlohmann::json diagram_json(const wd::WiringDiagram& d);

std::string machine_text(const behavior::MooreMachine& m);
std::string system_text(const behavior::LTISystem& l);
std::string behavior_text(const security::Behavior& b);
std::string contract_text(const contracts::StaticContract& c);
std::string diagram_text(const wd::WiringDiagram& d);

/// One row per step: t, state columns, input columns, output columns. The
/// final row's input cells are empty (T inputs, T+1 states and outputs).
std::string trajectory_csv(const behavior::FiniteTrajectory& t,
                           const behavior::MooreMachine& m);
std::string trajectory_csv(const behavior::LinearTrajectory& t);

struct ParsedTrajectory {
  behavior::FiniteTrajectory finite;
  behavior::LinearTrajectory linear;
  bool is_finite = false;
};

/// Reads a trajectory CSV back, shaped by the interface it was recorded for.
ParsedTrajectory parse_trajectory_csv(const std::string& text, const wd::Interface& iface);

}  // namespace wiredsys::dsl
