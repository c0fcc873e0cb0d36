#include <algorithm>

#include "wiredsys/dsl/model.hpp"
#include "wiredsys/error.hpp"

namespace wiredsys::dsl {

namespace {

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

std::string tuple_text(const std::vector<wd::PortType>& ports, std::size_t index) {
  const wd::Tuple t = wd::index_to_tuple(ports, index);
  std::string s = "(";
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (p) s += ", ";
    s += std::get<wd::FiniteSet>(ports[p]).labels[t[p]];
  }
  return s + ")";
}

bool all_finite(const wd::Interface& iface) {
  auto fin = [](const wd::PortType& t) { return wd::is_finite(t); };
  return std::all_of(iface.inputs.begin(), iface.inputs.end(), fin) &&
         std::all_of(iface.outputs.begin(), iface.outputs.end(), fin);
}

class Checker {
 public:
  explicit Checker(const Model& m) : model_(m) {}

  std::vector<Diagnostic> run() {
    for (const auto& w : model_.wirings) check_wiring(w);
    for (const auto& m : model_.moores) check_moore(m);
    for (const auto& l : model_.ltis) check_lti(l);
    for (const auto& c : model_.contracts) check_contract(c);
    for (const auto& tc : model_.timecontracts) check_timecontract(tc);
    for (const auto& t : model_.tests) check_test(t);
    for (const auto& k : model_.kbs) check_kb(k);
    for (const auto& a : model_.attacks) check_attack(a);
    return std::move(diags_);
  }

 private:
  const Model& model_;
  std::vector<Diagnostic> diags_;

  void error(SourceLoc loc, std::string message) {
    diags_.push_back({Diagnostic::Severity::Error, loc, std::move(message)});
  }

  void check_wiring(const WiringDecl& w) {
    for (const wd::Violation& v : wd::validate_diagram(w.diagram)) {
      error(w.loc, "wiring '" + w.name + "': " + v.message);
    }
  }

  void check_moore(const MooreDecl& decl) {
    const auto& m = decl.machine;
    bool missing = false;
    for (std::size_t s = 0; s < m.update.size(); ++s) {
      for (std::size_t x = 0; x < m.update[s].size(); ++x) {
        if (m.update[s][x] == kUnassigned) {
          error(decl.loc, "moore '" + decl.name + "': update is missing (" +
                              m.states[s] + ", " + tuple_text(m.iface.inputs, x) + ")");
          missing = true;
        }
      }
    }
    for (std::size_t s = 0; s < m.readout.size(); ++s) {
      if (!m.iface.outputs.empty() && m.readout[s].empty()) {
        error(decl.loc,
              "moore '" + decl.name + "': readout is missing for state " + m.states[s]);
        missing = true;
      }
    }
    if (missing) return;
    for (const std::string& issue : behavior::validate_machine(m)) {
      error(decl.loc, "moore '" + decl.name + "': " + issue);
    }
  }

  void check_lti(const LtiDecl& decl) {
    for (const std::string& issue : behavior::validate_system(decl.system)) {
      error(decl.loc, "lti '" + decl.name + "': " + issue);
    }
  }

  void check_contract(const ContractDecl& decl) {
    if (decl.contract.is_empty()) {
      diags_.push_back({Diagnostic::Severity::Warning, decl.loc,
                        "contract '" + decl.name +
                            "' allows no tuples at all (an empty wire subset or "
                            "an empty relation)"});
    }
  }

  void check_timecontract(const TimeContractDecl& decl) {
    const BoxDecl* box = model_.find_box(decl.box);
    if (box == nullptr) return;  // reported at parse time
    switch (decl.kind) {
      case TimeContractDecl::Kind::Lift: {
        const ContractDecl* c = model_.find_contract(decl.lifted_contract);
        if (c == nullptr) {
          error(decl.loc, "timecontract '" + decl.name + "': unknown contract '" +
                              decl.lifted_contract + "'");
          return;
        }
        if (c->box != decl.box) {
          error(decl.loc, "timecontract '" + decl.name + "': contract '" +
                              decl.lifted_contract + "' is for box '" + c->box + "'");
        }
        if (!all_finite(box->iface)) {
          error(decl.loc, "timecontract '" + decl.name +
                              "': lifting needs finite wires (sampled lifts are a "
                              "library-level operation)");
        }
        break;
      }
      case TimeContractDecl::Kind::Window: {
        const bool shape_ok = box->iface.inputs.size() == 1 &&
                              box->iface.outputs.size() == 1 &&
                              wd::is_linear(box->iface.inputs[0]) &&
                              wd::is_linear(box->iface.outputs[0]) &&
                              wd::dimension(box->iface.inputs[0]) == 1 &&
                              wd::dimension(box->iface.outputs[0]) == 1;
        if (!shape_ok) {
          error(decl.loc, "timecontract '" + decl.name +
                              "': window contracts need one scalar input and one "
                              "scalar output wire");
        }
        if (decl.assume.empty() || decl.guarantee.empty()) {
          error(decl.loc, "timecontract '" + decl.name + "': empty interval");
        }
        break;
      }
      case TimeContractDecl::Kind::Implies: {
        const bool shape_ok = box->iface.inputs.size() == 1 &&
                              box->iface.outputs.size() == 1 &&
                              wd::is_finite(box->iface.inputs[0]) &&
                              wd::is_finite(box->iface.outputs[0]);
        if (!shape_ok) {
          error(decl.loc, "timecontract '" + decl.name +
                              "': implies contracts need one finite input and one "
                              "finite output wire");
          return;
        }
        const auto& in_labels = std::get<wd::FiniteSet>(box->iface.inputs[0]).labels;
        const auto& out_labels = std::get<wd::FiniteSet>(box->iface.outputs[0]).labels;
        for (const std::string& p : decl.pattern) {
          if (std::find(in_labels.begin(), in_labels.end(), p) == in_labels.end()) {
            error(decl.loc, "timecontract '" + decl.name + "': pattern label '" + p +
                                "' is not an input value");
          }
        }
        if (std::find(out_labels.begin(), out_labels.end(), decl.response) ==
            out_labels.end()) {
          error(decl.loc, "timecontract '" + decl.name + "': response label '" +
                              decl.response + "' is not an output value");
        }
        if (decl.within == 0) {
          error(decl.loc, "timecontract '" + decl.name + "': within must be positive");
        }
        break;
      }
      case TimeContractDecl::Kind::Table: {
        const bool shape_ok = box->iface.inputs.size() == 1 &&
                              box->iface.outputs.size() == 1 &&
                              wd::is_finite(box->iface.inputs[0]) &&
                              wd::is_finite(box->iface.outputs[0]);
        if (!shape_ok) {
          error(decl.loc, "timecontract '" + decl.name +
                              "': table contracts need one finite input and one "
                              "finite output wire");
          return;
        }
        const auto& in_labels = std::get<wd::FiniteSet>(box->iface.inputs[0]).labels;
        const auto& out_labels = std::get<wd::FiniteSet>(box->iface.outputs[0]).labels;
        for (const auto& [in_word, out_word] : decl.rows) {
          if (in_word.size() != out_word.size()) {
            error(decl.loc, "timecontract '" + decl.name +
                                "': row sections have different lengths");
          }
          if (in_word.size() > decl.horizon + 1) {
            error(decl.loc,
                  "timecontract '" + decl.name + "': row is longer than the horizon");
          }
          for (const std::string& v : in_word) {
            if (std::find(in_labels.begin(), in_labels.end(), v) == in_labels.end()) {
              error(decl.loc, "timecontract '" + decl.name + "': label '" + v +
                                  "' is not an input value");
            }
          }
          for (const std::string& v : out_word) {
            if (std::find(out_labels.begin(), out_labels.end(), v) == out_labels.end()) {
              error(decl.loc, "timecontract '" + decl.name + "': label '" + v +
                                  "' is not an output value");
            }
          }
        }
        break;
      }
    }
  }

  void check_test(const TestDecl& decl) {
    const BoxDecl* box = model_.find_box(decl.box);
    if (box == nullptr) return;
    if (decl.kind == TestDecl::Kind::Terminal) return;
    if (!all_finite(box->iface)) {
      error(decl.loc, "test '" + decl.name +
                          "': trace and io-table tests need finite wires");
      return;
    }
    if (decl.kind == TestDecl::Kind::Trace) {
      for (const auto& tuple : decl.trace_inputs) {
        if (tuple.size() != box->iface.inputs.size()) {
          error(decl.loc, "test '" + decl.name + "': input tuple arity " +
                              std::to_string(tuple.size()) + " does not match box '" +
                              decl.box + "'");
          continue;
        }
        for (std::size_t p = 0; p < tuple.size(); ++p) {
          const auto& labels = std::get<wd::FiniteSet>(box->iface.inputs[p]).labels;
          if (std::find(labels.begin(), labels.end(), tuple[p]) == labels.end()) {
            error(decl.loc, "test '" + decl.name + "': label '" + tuple[p] +
                                "' is not a value of input port " + std::to_string(p));
          }
        }
      }
    }
  }

  void check_kb(const KbDecl& decl) {
    for (const std::string& entry : decl.entries) {
      const auto behavior = model_.find_behavior(entry);
      if (!behavior) {
        error(decl.loc, "kb '" + decl.name + "': unknown behavior '" + entry + "'");
        continue;
      }
      const auto box = model_.behavior_box(entry);
      if (box && *box != decl.box) {
        error(decl.loc, "kb '" + decl.name + "': behavior '" + entry +
                            "' inhabits box '" + *box + "', not '" + decl.box + "'");
      }
    }
  }

  void check_attack(const AttackDecl& decl) {
    const WiringDecl* w = model_.find_wiring(decl.wiring);
    if (w == nullptr) return;

    auto inner_index = [&](const std::string& name) -> std::optional<std::size_t> {
      std::optional<std::size_t> found;
      for (std::size_t b = 0; b < w->inner_names.size(); ++b) {
        if (w->inner_names[b] != name) continue;
        if (found) {
          error(decl.loc, "attack '" + decl.name + "': box name '" + name +
                              "' is ambiguous in wiring '" + w->name + "'");
          return std::nullopt;
        }
        found = b;
      }
      if (!found) {
        error(decl.loc, "attack '" + decl.name + "': '" + name +
                            "' is not an inner box of wiring '" + w->name + "'");
      }
      return found;
    };

    if (!decl.base.empty() && decl.base.size() != w->inner_names.size()) {
      error(decl.loc, "attack '" + decl.name + "': base lists " +
                          std::to_string(decl.base.size()) + " behaviors, wiring has " +
                          std::to_string(w->inner_names.size()) + " boxes");
    }
    for (std::size_t b = 0; b < decl.base.size() && b < w->inner_names.size(); ++b) {
      const auto behavior = model_.find_behavior(decl.base[b]);
      if (!behavior) {
        error(decl.loc, "attack '" + decl.name + "': unknown behavior '" + decl.base[b] + "'");
        continue;
      }
      if (!wd::same_ports(security::behavior_iface(*behavior), w->diagram.inner[b])) {
        error(decl.loc, "attack '" + decl.name + "': base behavior '" + decl.base[b] +
                            "' does not inhabit box '" + w->inner_names[b] + "'");
      }
    }
    for (const auto& [box, beh] : decl.rewrites) {
      const auto idx = inner_index(box);
      const auto behavior = model_.find_behavior(beh);
      if (!behavior) {
        error(decl.loc, "attack '" + decl.name + "': unknown behavior '" + beh + "'");
        continue;
      }
      if (idx && !wd::same_ports(security::behavior_iface(*behavior),
                                 w->diagram.inner[*idx])) {
        error(decl.loc, "attack '" + decl.name + "': replacement '" + beh +
                            "' does not fit box '" + box + "'");
      }
    }
    for (const auto& rw : decl.rewires) {
      const auto idx = inner_index(rw.box);
      if (!idx) continue;
      if (rw.port >= w->diagram.inner[*idx].inputs.size()) {
        error(decl.loc, "attack '" + decl.name + "': '" + rw.box + "' has no input " +
                            std::to_string(rw.port));
        continue;
      }
      const wd::PortType& t = w->diagram.inner[*idx].inputs[rw.port];
      if (rw.const_label) {
        if (wd::is_finite(t)) {
          const auto& labels = std::get<wd::FiniteSet>(t).labels;
          if (std::find(labels.begin(), labels.end(), *rw.const_label) == labels.end()) {
            error(decl.loc, "attack '" + decl.name + "': constant '" + *rw.const_label +
                                "' is not a value of the cut wire");
          }
        }
        // Linear constants are validated when the attack is applied.
      } else if (rw.from_box) {
        const auto src = inner_index(rw.from_box->first);
        if (src && rw.from_box->second >= w->diagram.inner[*src].outputs.size()) {
          error(decl.loc, "attack '" + decl.name + "': '" + rw.from_box->first +
                              "' has no output " + std::to_string(rw.from_box->second));
        } else if (src &&
                   !wd::type_equal(w->diagram.inner[*src].outputs[rw.from_box->second], t)) {
          error(decl.loc, "attack '" + decl.name + "': rewire source type mismatch");
        }
      } else if (rw.from_outer) {
        if (*rw.from_outer >= w->diagram.outer.inputs.size()) {
          error(decl.loc, "attack '" + decl.name + "': outer input " +
                              std::to_string(*rw.from_outer) + " does not exist");
        } else if (!wd::type_equal(w->diagram.outer.inputs[*rw.from_outer], t)) {
          error(decl.loc, "attack '" + decl.name + "': rewire source type mismatch");
        }
      }
    }
  }
};

}  // namespace

std::vector<Diagnostic> typecheck_model(const Model& m) { return Checker(m).run(); }

}  // namespace wiredsys::dsl
