// wiredsys: compositional systems-modeling toolkit.
//
// Subcommands: check, flatten, compose, simulate, contract, satisfies,
// probe, attack. Exit codes: 0 success, 1 usage or internal error,
// 2 check/verification failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wiredsys/dsl/model.hpp"
#include "wiredsys/dsl/report.hpp"
#include "wiredsys/error.hpp"
#include "wiredsys/security/attack.hpp"
#include "wiredsys/security/testing.hpp"
#include "wiredsys/util/numfmt.hpp"

namespace {

using namespace wiredsys;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kCheckFailed = 2;

struct CheckFailure {
  std::string message;
};
struct UsageFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure{"cannot open '" + path + "'"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

dsl::Model load_checked(const std::string& path) {
  auto result = dsl::parse_model(read_file(path));
  auto more = dsl::typecheck_model(result.model);
  result.diagnostics.insert(result.diagnostics.end(), more.begin(), more.end());
  bool failed = false;
  for (const auto& d : result.diagnostics) {
    std::cerr << path << ":" << dsl::to_string(d) << "\n";
    failed = failed || d.severity == dsl::Diagnostic::Severity::Error;
  }
  if (failed) throw CheckFailure{"model '" + path + "' has errors"};
  return std::move(result.model);
}

security::Behavior resolve_behavior(const dsl::Model& model, const std::string& name) {
  auto b = model.find_behavior(name);
  if (!b) throw UsageFailure{"unknown behavior '" + name + "'"};
  return *b;
}

std::vector<security::Behavior> resolve_behaviors(const dsl::Model& model,
                                                  const dsl::WiringDecl& wiring,
                                                  const std::vector<std::string>& names) {
  if (names.size() != wiring.diagram.inner.size()) {
    throw UsageFailure{"wiring '" + wiring.name + "' has " +
                       std::to_string(wiring.diagram.inner.size()) + " boxes but " +
                       std::to_string(names.size()) + " behaviors were given"};
  }
  std::vector<security::Behavior> out;
  for (std::size_t b = 0; b < names.size(); ++b) {
    security::Behavior beh = resolve_behavior(model, names[b]);
    if (!wd::same_ports(security::behavior_iface(beh), wiring.diagram.inner[b])) {
      throw UsageFailure{"behavior '" + names[b] + "' does not inhabit box '" +
                         wiring.inner_names[b] + "'"};
    }
    out.push_back(std::move(beh));
  }
  return out;
}

const dsl::WiringDecl& resolve_wiring(const dsl::Model& model, const std::string& name) {
  const dsl::WiringDecl* w = model.find_wiring(name);
  if (w == nullptr) throw UsageFailure{"unknown wiring '" + name + "'"};
  return *w;
}

security::SecurityTest build_test(const dsl::Model& model, const dsl::TestDecl& decl) {
  switch (decl.kind) {
    case dsl::TestDecl::Kind::Terminal: {
      auto t = security::terminal_test();
      t.name = decl.name;
      return t;
    }
    case dsl::TestDecl::Kind::Trace: {
      const dsl::BoxDecl* box = model.find_box(decl.box);
      std::vector<wd::Tuple> inputs;
      for (const auto& labels : decl.trace_inputs) {
        wd::Tuple t;
        for (std::size_t p = 0; p < labels.size(); ++p) {
          const auto& pool = std::get<wd::FiniteSet>(box->iface.inputs[p]).labels;
          t.push_back(static_cast<std::size_t>(
              std::find(pool.begin(), pool.end(), labels[p]) - pool.begin()));
        }
        inputs.push_back(std::move(t));
      }
      return security::trace_test(decl.name, decl.trace_init, std::move(inputs));
    }
    case dsl::TestDecl::Kind::IoTable: {
      auto t = security::iotable_test(decl.horizon);
      t.name = decl.name;
      return t;
    }
  }
  throw UsageFailure{"unsupported test kind"};
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_check(const std::string& file) {
  load_checked(file);
  std::cout << "ok\n";
  return kOk;
}

int cmd_flatten(const std::string& file, const std::string& wiring_name, int depth,
                bool json) {
  const dsl::Model model = load_checked(file);
  wd::WiringDiagram d = resolve_wiring(model, wiring_name).diagram;

  // One level inlines every box that has a wiring declared for it; spliced
  // children belong to the next level.
  for (int level = 0; depth < 0 || level < depth; ++level) {
    bool changed = false;
    for (std::size_t b = 0; b < d.inner.size();) {
      const dsl::WiringDecl* impl = nullptr;
      for (const auto& w : model.wirings) {
        if (w.outer_name != d.inner[b].name) continue;
        if (impl != nullptr) {
          throw UsageFailure{"box '" + d.inner[b].name +
                             "' has several implementations; flattening is ambiguous"};
        }
        impl = &w;
      }
      if (impl == nullptr) {
        ++b;
        continue;
      }
      d = wd::substitute(d, b, impl->diagram);
      b += impl->diagram.inner.size();
      changed = true;
    }
    if (!changed) break;
  }
  std::cout << (json ? dsl::diagram_json(d).dump(2) + "\n" : dsl::diagram_text(d));
  return kOk;
}

int cmd_compose(const std::string& file, const std::string& wiring_name,
                const std::string& behaviors, bool json) {
  const dsl::Model model = load_checked(file);
  const dsl::WiringDecl& wiring = resolve_wiring(model, wiring_name);
  const auto resolved = resolve_behaviors(model, wiring, split_list(behaviors));
  const security::Behavior composite = security::compose_behaviors(wiring.diagram, resolved);
  std::cout << (json ? dsl::behavior_json(composite).dump(2) + "\n"
                     : dsl::behavior_text(composite));
  return kOk;
}

int cmd_simulate(const std::string& file, const std::string& system,
                 const std::string& init, const std::string& inputs_path, int steps,
                 bool json) {
  const dsl::Model model = load_checked(file);
  const security::Behavior b = resolve_behavior(model, system);
  const std::string inputs_text = read_file(inputs_path);

  std::vector<std::vector<std::string>> rows;
  {
    std::istringstream is(inputs_text);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::string cell;
      std::istringstream ls(line);
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      rows.push_back(std::move(cells));
    }
  }
  // An optional header row is recognized by its first column name only; bare
  // value labels (such as a boolean "t") are data.
  if (!rows.empty() && !rows[0].empty() && rows[0][0] == "in0") {
    rows.erase(rows.begin());
  }
  if (steps >= 0 && static_cast<std::size_t>(steps) < rows.size()) {
    rows.resize(static_cast<std::size_t>(steps));
  }
  if (steps >= 0 && rows.size() < static_cast<std::size_t>(steps)) {
    throw UsageFailure{"inputs file has only " + std::to_string(rows.size()) + " steps"};
  }

  if (std::holds_alternative<behavior::MooreMachine>(b)) {
    const auto& m = std::get<behavior::MooreMachine>(b);
    std::size_t s0 = m.init;
    if (!init.empty()) {
      const auto it = std::find(m.states.begin(), m.states.end(), init);
      if (it == m.states.end()) throw UsageFailure{"unknown state '" + init + "'"};
      s0 = static_cast<std::size_t>(it - m.states.begin());
    }
    std::vector<wd::Tuple> inputs;
    for (const auto& cells : rows) {
      if (cells.size() != m.iface.inputs.size()) {
        throw UsageFailure{"input row arity does not match the machine"};
      }
      wd::Tuple t;
      for (std::size_t p = 0; p < cells.size(); ++p) {
        const auto& pool = std::get<wd::FiniteSet>(m.iface.inputs[p]).labels;
        const auto it = std::find(pool.begin(), pool.end(), cells[p]);
        if (it == pool.end()) throw UsageFailure{"unknown label '" + cells[p] + "'"};
        t.push_back(static_cast<std::size_t>(it - pool.begin()));
      }
      inputs.push_back(std::move(t));
    }
    const auto tr = behavior::simulate(m, s0, inputs);
    if (json) {
      nlohmann::json j;
      j["csv"] = dsl::trajectory_csv(tr, m);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << dsl::trajectory_csv(tr, m);
    }
    return kOk;
  }

  const auto& l = std::get<behavior::LTISystem>(b);
  Eigen::VectorXd s0 = Eigen::VectorXd::Zero(l.state_dim());
  if (!init.empty()) {
    const auto cells = split_list(init);
    if (static_cast<Eigen::Index>(cells.size()) != l.state_dim()) {
      throw UsageFailure{"initial state needs " + std::to_string(l.state_dim()) +
                         " coordinates"};
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      s0(static_cast<Eigen::Index>(i)) = std::strtod(cells[i].c_str(), nullptr);
    }
  }
  std::vector<Eigen::VectorXd> inputs;
  for (const auto& cells : rows) {
    if (static_cast<Eigen::Index>(cells.size()) != l.B.cols()) {
      throw UsageFailure{"input row arity does not match the system"};
    }
    Eigen::VectorXd v(l.B.cols());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = std::strtod(cells[i].c_str(), nullptr);
    }
    inputs.push_back(std::move(v));
  }
  const auto tr = behavior::simulate(l, s0, inputs);
  if (json) {
    nlohmann::json j;
    j["csv"] = dsl::trajectory_csv(tr);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << dsl::trajectory_csv(tr);
  }
  return kOk;
}

int cmd_contract(const std::string& file, const std::string& wiring_name,
                 const std::string& contracts_list, bool json) {
  const dsl::Model model = load_checked(file);
  const dsl::WiringDecl& wiring = resolve_wiring(model, wiring_name);
  const auto names = split_list(contracts_list);
  if (names.size() != wiring.diagram.inner.size()) {
    throw UsageFailure{"wiring '" + wiring.name + "' has " +
                       std::to_string(wiring.diagram.inner.size()) + " boxes but " +
                       std::to_string(names.size()) + " contracts were given"};
  }

  std::vector<const dsl::ContractDecl*> decls;
  bool all_independent = true;
  for (std::size_t b = 0; b < names.size(); ++b) {
    const dsl::ContractDecl* c = model.find_contract(names[b]);
    if (c == nullptr) throw UsageFailure{"unknown contract '" + names[b] + "'"};
    if (!wd::same_ports(c->contract.iface(), wiring.diagram.inner[b])) {
      throw UsageFailure{"contract '" + names[b] + "' does not fit box '" +
                         wiring.inner_names[b] + "'"};
    }
    all_independent = all_independent &&
                      std::holds_alternative<contracts::IndependentContract>(c->contract.rep);
    decls.push_back(c);
  }

  contracts::StaticContract composite = contracts::StaticContract::empty(wiring.diagram.outer);
  if (all_independent) {
    std::vector<contracts::IndependentContract> cs;
    for (const auto* c : decls) {
      cs.push_back(std::get<contracts::IndependentContract>(c->contract.rep));
    }
    composite = contracts::contract_apply_independent(wiring.diagram, cs);
  } else {
    contracts::StaticContract joint = decls[0]->contract;
    for (std::size_t b = 1; b < decls.size(); ++b) {
      joint = contracts::contract_tensor(joint, decls[b]->contract);
    }
    composite = contracts::StaticContract{
        contracts::contract_apply_finite(wiring.diagram, contracts::to_finite_relation(joint))};
  }
  std::cout << (json ? dsl::contract_json(composite).dump(2) + "\n"
                     : dsl::contract_text(composite));
  return kOk;
}

int cmd_satisfies(const std::string& file, const std::string& trajectory_path,
                  const std::string& contract_name, bool json) {
  const dsl::Model model = load_checked(file);
  const dsl::ContractDecl* c = model.find_contract(contract_name);
  if (c == nullptr) throw UsageFailure{"unknown contract '" + contract_name + "'"};

  const auto parsed =
      dsl::parse_trajectory_csv(read_file(trajectory_path), c->contract.iface());
  const contracts::SatisfiesResult verdict =
      parsed.is_finite ? contracts::satisfies(parsed.finite, c->contract)
                       : contracts::satisfies(parsed.linear, c->contract);

  if (json) {
    nlohmann::json j;
    j["satisfied"] = verdict.ok;
    if (verdict.first_violation) j["first_violation"] = *verdict.first_violation;
    std::cout << j.dump(2) << "\n";
  } else if (verdict.ok) {
    std::cout << "satisfied\n";
  } else {
    std::cout << "violated at step " << *verdict.first_violation << "\n";
  }
  return verdict.ok ? kOk : kCheckFailed;
}

int cmd_probe(const std::string& file, const std::string& target, const std::string& kb_name,
              const std::string& tests_list, bool json) {
  const dsl::Model model = load_checked(file);
  const dsl::KbDecl* kb_decl = model.find_kb(kb_name);
  if (kb_decl == nullptr) throw UsageFailure{"unknown kb '" + kb_name + "'"};

  security::KnowledgeDatabase kb;
  kb.iface = model.find_box(kb_decl->box)->iface;
  for (const std::string& entry : kb_decl->entries) {
    kb.entries.push_back({entry, resolve_behavior(model, entry)});
  }

  std::vector<security::SecurityTest> tests;
  for (const std::string& name : split_list(tests_list)) {
    const dsl::TestDecl* t = model.find_test(name);
    if (t == nullptr) throw UsageFailure{"unknown test '" + name + "'"};
    if (t->box != kb_decl->box) {
      throw UsageFailure{"test '" + name + "' is for box '" + t->box + "', kb is for '" +
                         kb_decl->box + "'"};
    }
    tests.push_back(build_test(model, *t));
  }

  const security::Behavior target_behavior = resolve_behavior(model, target);
  const nlohmann::json obs = security::run_tests(target_behavior, tests);
  const auto candidates = security::yoneda_filter(obs, kb, tests);

  nlohmann::json verdict;
  verdict["candidates"] = candidates;
  verdict["observations"] = obs;
  if (json) {
    std::cout << verdict.dump(2) << "\n";
  } else {
    std::cout << "candidates:";
    for (const auto& c : candidates) std::cout << " " << c;
    std::cout << "\n";
  }
  return kOk;
}

int cmd_attack(const std::string& file, const std::string& plan_name, bool verify_equiv,
               bool json) {
  const dsl::Model model = load_checked(file);
  const dsl::AttackDecl* decl = model.find_attack(plan_name);
  if (decl == nullptr) throw UsageFailure{"unknown attack '" + plan_name + "'"};
  const dsl::WiringDecl& wiring = resolve_wiring(model, decl->wiring);
  if (decl->base.empty()) {
    throw UsageFailure{"attack '" + plan_name + "' declares no base behaviors"};
  }
  const auto base = resolve_behaviors(model, wiring, decl->base);

  security::AttackPlan plan;
  for (const auto& [box, beh] : decl->rewrites) {
    plan.rewrites.emplace(box, resolve_behavior(model, beh));
  }
  auto inner_index = [&wiring](const std::string& name) {
    for (std::size_t b = 0; b < wiring.inner_names.size(); ++b) {
      if (wiring.inner_names[b] == name) return b;
    }
    throw UsageFailure{"'" + name + "' is not an inner box"};
  };
  for (const auto& rw : decl->rewires) {
    security::RewireEdit edit;
    edit.box = inner_index(rw.box);
    edit.port = rw.port;
    if (rw.const_label) {
      const wd::PortType& t = wiring.diagram.inner[edit.box].inputs[edit.port];
      if (wd::is_finite(t)) {
        const auto& pool = std::get<wd::FiniteSet>(t).labels;
        const auto it = std::find(pool.begin(), pool.end(), *rw.const_label);
        edit.source = security::ConstFinite{
            static_cast<std::size_t>(it - pool.begin())};
      } else {
        Eigen::VectorXd v(wd::dimension(t));
        v.setConstant(std::strtod(rw.const_label->c_str(), nullptr));
        edit.source = security::ConstLinear{v};
      }
    } else if (rw.from_outer) {
      edit.source = wd::Source{wd::OuterInput{*rw.from_outer}};
    } else {
      edit.source = wd::Source{wd::InnerOutput{inner_index(rw.from_box->first),
                                               rw.from_box->second}};
    }
    plan.rewires.push_back(std::move(edit));
  }

  const auto outcome = security::apply_attack(wiring.diagram, base, plan);

  nlohmann::json verdict;
  verdict["before"] = dsl::behavior_json(outcome.original);
  verdict["after"] = dsl::behavior_json(outcome.attacked);
  verdict["diagram"] = dsl::diagram_json(outcome.attacked_diagram);
  bool equivalent = false;
  if (verify_equiv) {
    if (std::holds_alternative<behavior::MooreMachine>(outcome.original) &&
        std::holds_alternative<behavior::MooreMachine>(outcome.attacked)) {
      const auto& before = std::get<behavior::MooreMachine>(outcome.original);
      const auto& after = std::get<behavior::MooreMachine>(outcome.attacked);
      const auto witness = security::distinguishing_trace(before, after);
      equivalent = !witness.has_value();
      if (witness) {
        // The shortest run on which the composites diverge.
        nlohmann::json diff;
        nlohmann::json inputs = nlohmann::json::array();
        for (const wd::Tuple& t : *witness) {
          nlohmann::json tuple = nlohmann::json::array();
          for (std::size_t p = 0; p < t.size(); ++p) {
            tuple.push_back(std::get<wd::FiniteSet>(before.iface.inputs[p]).labels[t[p]]);
          }
          inputs.push_back(std::move(tuple));
        }
        diff["inputs"] = std::move(inputs);
        auto outputs_of = [&](const behavior::MooreMachine& m) {
          const auto tr = behavior::simulate(m, m.init, *witness);
          nlohmann::json outs = nlohmann::json::array();
          for (const wd::Tuple& o : tr.outputs) {
            nlohmann::json tuple = nlohmann::json::array();
            for (std::size_t p = 0; p < o.size(); ++p) {
              tuple.push_back(std::get<wd::FiniteSet>(m.iface.outputs[p]).labels[o[p]]);
            }
            outs.push_back(std::move(tuple));
          }
          return outs;
        };
        diff["before_outputs"] = outputs_of(before);
        diff["after_outputs"] = outputs_of(after);
        verdict["trace_diff"] = std::move(diff);
      }
    } else {
      equivalent = behavior::system_equal(std::get<behavior::LTISystem>(outcome.original),
                                          std::get<behavior::LTISystem>(outcome.attacked),
                                          1e-9);
    }
    verdict["equivalent"] = equivalent;
  }
  if (json) {
    std::cout << verdict.dump(2) << "\n";
  } else {
    std::cout << "before:\n"
              << dsl::behavior_text(outcome.original) << "after:\n"
              << dsl::behavior_text(outcome.attacked);
    if (verify_equiv) {
      std::cout << "equivalent: " << (equivalent ? "true" : "false") << "\n";
    }
  }
  if (verify_equiv && !equivalent) return kCheckFailed;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compositional systems-modeling toolkit"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "emit JSON instead of text");

  std::string file, wiring, behaviors, system, init, inputs, contracts_list, trajectory,
      contract, target, kb, tests, plan;
  int depth = -1;
  int steps = -1;
  bool verify_equiv = false;

  auto* check = app.add_subcommand("check", "parse and typecheck a model");
  check->add_option("file", file)->required();

  auto* flatten = app.add_subcommand("flatten", "inline sub-wirings into a wiring");
  flatten->add_option("file", file)->required();
  flatten->add_option("--wiring", wiring)->required();
  flatten->add_option("--depth", depth, "levels to inline (default: all)");

  auto* compose = app.add_subcommand("compose", "compose behaviors over a wiring");
  compose->add_option("file", file)->required();
  compose->add_option("--wiring", wiring)->required();
  compose->add_option("--behaviors", behaviors, "comma-separated, one per box")->required();

  auto* simulate = app.add_subcommand("simulate", "run a behavior on an input file");
  simulate->add_option("file", file)->required();
  simulate->add_option("--system", system)->required();
  simulate->add_option("--init", init, "initial state (label or comma-separated reals)");
  simulate->add_option("--inputs", inputs, "CSV of input tuples, one row per step")
      ->required();
  simulate->add_option("--steps", steps, "number of steps (default: all rows)");

  auto* contract_cmd = app.add_subcommand("contract", "compose contracts over a wiring");
  contract_cmd->add_option("file", file)->required();
  contract_cmd->add_option("--wiring", wiring)->required();
  contract_cmd->add_option("--contracts", contracts_list, "comma-separated, one per box")
      ->required();

  auto* satisfies = app.add_subcommand("satisfies", "judge a trajectory against a contract");
  satisfies->add_option("file", file)->required();
  satisfies->add_option("--trajectory", trajectory, "trajectory CSV file")->required();
  satisfies->add_option("--contract", contract)->required();

  auto* probe = app.add_subcommand("probe", "filter a knowledge base by test outcomes");
  probe->add_option("file", file)->required();
  probe->add_option("--target", target)->required();
  probe->add_option("--kb", kb)->required();
  probe->add_option("--tests", tests, "comma-separated test names")->required();

  auto* attack = app.add_subcommand("attack", "apply an attack plan and recompose");
  attack->add_option("file", file)->required();
  attack->add_option("--plan", plan)->required();
  attack->add_flag("--verify-equiv", verify_equiv,
                   "also decide behavioral equivalence (exit 2 when changed)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(file);
    if (flatten->parsed()) return cmd_flatten(file, wiring, depth, json);
    if (compose->parsed()) return cmd_compose(file, wiring, behaviors, json);
    if (simulate->parsed()) return cmd_simulate(file, system, init, inputs, steps, json);
    if (contract_cmd->parsed()) return cmd_contract(file, wiring, contracts_list, json);
    if (satisfies->parsed()) return cmd_satisfies(file, trajectory, contract, json);
    if (probe->parsed()) return cmd_probe(file, target, kb, tests, json);
    if (attack->parsed()) return cmd_attack(file, plan, verify_equiv, json);
  } catch (const CheckFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kCheckFailed;
  } catch (const UsageFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
