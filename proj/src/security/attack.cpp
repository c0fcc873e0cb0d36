#include "wiredsys/security/attack.hpp"

#include <algorithm>

#include "wiredsys/error.hpp"

namespace wiredsys::security {

namespace {

Behavior constant_generator(const wd::PortType& t, const NewSource& src,
                            std::size_t index) {
  wd::Interface iface{"const" + std::to_string(index), {}, {t}};
  if (std::holds_alternative<ConstFinite>(src)) {
    if (!wd::is_finite(t)) throw Error("rewire: finite constant on a linear wire");
    const std::size_t label = std::get<ConstFinite>(src).label;
    if (label >= wd::cardinality(t)) throw Error("rewire: constant label out of range");
    behavior::MooreMachine m;
    m.iface = iface;
    m.states = {"*"};
    m.update = {{0}};
    m.readout = {{label}};
    return m;
  }
  if (!wd::is_linear(t)) throw Error("rewire: linear constant on a finite wire");
  const Eigen::VectorXd& v = std::get<ConstLinear>(src).value;
  if (v.size() != wd::dimension(t)) throw Error("rewire: constant dimension mismatch");
  if (!v.isZero(0.0)) {
    throw Error("rewire: only the zero constant is expressible for linear wires");
  }
  behavior::LTISystem l;
  l.iface = iface;
  l.A.resize(0, 0);
  l.B.resize(0, 0);
  l.C = Eigen::MatrixXd::Zero(wd::dimension(t), 0);
  return l;
}

}  // namespace

RewiredModel rewire(const wd::WiringDiagram& d, const std::vector<Behavior>& behaviors,
                    const std::vector<RewireEdit>& edits) {
  if (behaviors.size() != d.inner.size()) {
    throw Error("rewire: one behavior per inner box required");
  }
  RewiredModel model{d, behaviors};
  for (const RewireEdit& e : edits) {
    if (e.box >= model.diagram.inner.size() ||
        e.port >= model.diagram.inner[e.box].inputs.size()) {
      throw Error("rewire: edit addresses a nonexistent port");
    }
    if (std::holds_alternative<wd::Source>(e.source)) {
      model.diagram.input_sources[e.box][e.port] = std::get<wd::Source>(e.source);
    } else {
      // Constants become fresh generator boxes wired to the cut port.
      const wd::PortType& t = model.diagram.inner[e.box].inputs[e.port];
      const Behavior gen = constant_generator(t, e.source, model.diagram.inner.size());
      model.diagram.inner.push_back(behavior_iface(gen));
      model.diagram.input_sources.push_back({});
      model.behaviors.push_back(gen);
      model.diagram.input_sources[e.box][e.port] =
          wd::InnerOutput{model.diagram.inner.size() - 1, 0};
    }
  }
  const auto report = wd::validate_diagram(model.diagram);
  if (!report.empty()) {
    throw Error("rewire: edited diagram is invalid: " + report.front().message);
  }
  return model;
}

std::vector<Behavior> rewrite(const wd::WiringDiagram& d,
                              const std::vector<Behavior>& behaviors,
                              const std::map<std::string, Behavior>& replacements) {
  if (behaviors.size() != d.inner.size()) {
    throw Error("rewrite: one behavior per inner box required");
  }
  std::vector<Behavior> out = behaviors;
  for (const auto& [name, replacement] : replacements) {
    bool found = false;
    for (std::size_t b = 0; b < d.inner.size(); ++b) {
      if (d.inner[b].name != name) continue;
      if (found) throw Error("rewrite: box name '" + name + "' is ambiguous");
      if (!wd::same_ports(behavior_iface(replacement), d.inner[b])) {
        throw Error("rewrite: replacement for '" + name + "' has the wrong interface");
      }
      out[b] = replacement;
      found = true;
    }
    if (!found) throw Error("rewrite: no inner box named '" + name + "'");
  }
  return out;
}

Behavior compose_behaviors(const wd::WiringDiagram& d,
                           const std::vector<Behavior>& behaviors) {
  const bool all_moore =
      std::all_of(behaviors.begin(), behaviors.end(), [](const Behavior& b) {
        return std::holds_alternative<behavior::MooreMachine>(b);
      });
  if (all_moore) {
    std::vector<behavior::MooreMachine> ms;
    ms.reserve(behaviors.size());
    for (const Behavior& b : behaviors) ms.push_back(std::get<behavior::MooreMachine>(b));
    return behavior::moore_apply(d, ms);
  }
  const bool all_lti =
      std::all_of(behaviors.begin(), behaviors.end(), [](const Behavior& b) {
        return std::holds_alternative<behavior::LTISystem>(b);
      });
  if (all_lti) {
    std::vector<behavior::LTISystem> ls;
    ls.reserve(behaviors.size());
    for (const Behavior& b : behaviors) ls.push_back(std::get<behavior::LTISystem>(b));
    return behavior::lti_apply(d, ls);
  }
  throw Error("compose_behaviors: cannot mix machines and linear systems");
}

AttackOutcome apply_attack(const wd::WiringDiagram& d,
                           const std::vector<Behavior>& behaviors,
                           const AttackPlan& plan) {
  AttackOutcome outcome;
  outcome.original = compose_behaviors(d, behaviors);
  RewiredModel model = rewire(d, behaviors, plan.rewires);
  model.behaviors = rewrite(model.diagram, model.behaviors, plan.rewrites);
  outcome.attacked = compose_behaviors(model.diagram, model.behaviors);
  outcome.attacked_diagram = std::move(model.diagram);
  return outcome;
}

}  // namespace wiredsys::security
