#pragma once

#include <map>

#include "wiredsys/security/testing.hpp"
#include "wiredsys/wd/ops.hpp"

namespace wiredsys::security {

/// A constant source for an input cut loose by a rewiring. Constants are
/// realized as ordinary generator boxes, so the composite stays inside the
/// algebra.
struct ConstFinite {
  std::size_t label = 0;
};
struct ConstLinear {
  Eigen::VectorXd value;  // only the zero vector is expressible linearly
};

using NewSource = std::variant<wd::Source, ConstFinite, ConstLinear>;

struct RewireEdit {
  std::size_t box = 0;
  std::size_t port = 0;
  NewSource source;
};

/// An attack: behavior replacements for named boxes, plus wiring edits.
struct AttackPlan {
  std::map<std::string, Behavior> rewrites;
  std::vector<RewireEdit> rewires;
};

/// A rewired model: the edited diagram together with the per-box behaviors
/// (constant generators appended at the end).
struct RewiredModel {
  wd::WiringDiagram diagram;
  std::vector<Behavior> behaviors;
};

RewiredModel rewire(const wd::WiringDiagram& d, const std::vector<Behavior>& behaviors,
                    const std::vector<RewireEdit>& edits);

/// Replaces the behaviors of the named inner boxes, leaving others unchanged.
std::vector<Behavior> rewrite(const wd::WiringDiagram& d,
                              const std::vector<Behavior>& behaviors,
                              const std::map<std::string, Behavior>& replacements);

/// Composes per-box behaviors over a wiring (all machines or all systems).
Behavior compose_behaviors(const wd::WiringDiagram& d,
                           const std::vector<Behavior>& behaviors);

struct AttackOutcome {
  Behavior original;
  Behavior attacked;
  wd::WiringDiagram attacked_diagram;
};

/// Applies the rewirings, then the rewrites, and recomposes. The unattacked
/// composite is returned alongside for comparison.
AttackOutcome apply_attack(const wd::WiringDiagram& d,
                           const std::vector<Behavior>& behaviors,
                           const AttackPlan& plan);

}  // namespace wiredsys::security
