#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wiredsys/behavior/lti.hpp"
#include "wiredsys/behavior/moore.hpp"
#include "wiredsys/contracts/static_contract.hpp"
#include "wiredsys/security/attack.hpp"
#include "wiredsys/temporal/time_contract.hpp"

namespace wiredsys::dsl {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SourceLoc loc;
  std::string message;
};

std::string to_string(const Diagnostic& d);

struct TypeDecl {
  std::string name;
  wd::PortType type;
  SourceLoc loc;
};

struct BoxDecl {
  std::string name;
  std::vector<std::string> input_types;   // declared type names, in order
  std::vector<std::string> output_types;
  wd::Interface iface;                    // resolved
  SourceLoc loc;
};

struct WiringDecl {
  std::string name;
  std::vector<std::string> inner_names;
  std::string outer_name;
  wd::WiringDiagram diagram;
  SourceLoc loc;
};

struct MooreDecl {
  std::string name;
  std::string box;
  behavior::MooreMachine machine;
  SourceLoc loc;
};

struct LtiDecl {
  std::string name;
  std::string box;
  behavior::LTISystem system;
  SourceLoc loc;
};

struct FnDecl {
  std::string name;
  std::string box;
  behavior::FiniteFn fn;
  SourceLoc loc;
};

struct LinFnDecl {
  std::string name;
  std::string box;
  behavior::LTISystem system;  // the embedded memoryless system
  SourceLoc loc;
};

struct ContractDecl {
  std::string name;
  std::string box;
  contracts::StaticContract contract;
  SourceLoc loc;
};

struct TimeContractDecl {
  enum class Kind { Lift, Window, Implies, Table };
  std::string name;
  std::string box;
  Kind kind = Kind::Lift;
  // lift
  std::string lifted_contract;
  // window
  contracts::IntervalSet assume;
  contracts::IntervalSet guarantee;
  std::size_t delay = 0;
  std::vector<double> samples;
  // implies
  std::vector<std::string> pattern;
  std::string response;
  std::size_t within = 0;
  // table: explicitly allowed (input section ; output section) label rows
  std::size_t horizon = 0;
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> rows;
  SourceLoc loc;
};

struct TestDecl {
  enum class Kind { Terminal, Trace, IoTable };
  std::string name;
  std::string box;
  Kind kind = Kind::Terminal;
  std::optional<std::string> trace_init;
  std::vector<std::vector<std::string>> trace_inputs;  // label tuples
  std::size_t horizon = 0;
  SourceLoc loc;
};

struct KbDecl {
  std::string name;
  std::string box;
  std::vector<std::string> entries;  // behavior names
  SourceLoc loc;
};

struct AttackDecl {
  struct Rewire {
    std::string box;
    std::size_t port = 0;
    // Exactly one of the three below.
    std::optional<std::pair<std::string, std::size_t>> from_box;  // box.out[k]
    std::optional<std::size_t> from_outer;                        // outer.in[k]
    std::optional<std::string> const_label;                       // const literal
  };
  std::string name;
  std::string wiring;
  std::vector<std::string> base;                              // behavior per inner box
  std::vector<std::pair<std::string, std::string>> rewrites;  // box -> behavior
  std::vector<Rewire> rewires;
  SourceLoc loc;
};

struct Model {
  std::vector<TypeDecl> types;
  std::vector<BoxDecl> boxes;
  std::vector<WiringDecl> wirings;
  std::vector<MooreDecl> moores;
  std::vector<LtiDecl> ltis;
  std::vector<FnDecl> fns;
  std::vector<LinFnDecl> linfns;
  std::vector<ContractDecl> contracts;
  std::vector<TimeContractDecl> timecontracts;
  std::vector<TestDecl> tests;
  std::vector<KbDecl> kbs;
  std::vector<AttackDecl> attacks;

  const TypeDecl* find_type(const std::string& name) const;
  const BoxDecl* find_box(const std::string& name) const;
  const WiringDecl* find_wiring(const std::string& name) const;
  const ContractDecl* find_contract(const std::string& name) const;
  const TestDecl* find_test(const std::string& name) const;
  const KbDecl* find_kb(const std::string& name) const;
  const AttackDecl* find_attack(const std::string& name) const;

  /// Looks a behavior up across the moore/lti/fn/linfn namespaces, returning
  /// it in composable form.
  std::optional<security::Behavior> find_behavior(const std::string& name) const;
  /// The box name a behavior was declared for, if any.
  std::optional<std::string> behavior_box(const std::string& name) const;
};

struct ParseResult {
  Model model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const {
    for (const auto& d : diagnostics) {
      if (d.severity == Diagnostic::Severity::Error) return false;
    }
    return true;
  }
};

/// Parses a model file. Declarations must precede their uses; diagnostics
/// carry source locations. Declarations that fail to parse are skipped.
ParseResult parse_model(std::string_view text);

/// Model-wide validation on top of parsing: diagram well-formedness, table
/// totality (naming any missing entries), behavior/contract conformance to
/// their boxes, and cross-reference consistency.
std::vector<Diagnostic> typecheck_model(const Model& m);

/// Canonical DSL text; re-parsing yields a structurally equal model.
std::string render_model(const Model& m);

bool model_equal(const Model& a, const Model& b);

}  // namespace wiredsys::dsl
