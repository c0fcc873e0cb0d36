#include "wiredsys/security/testing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "wiredsys/behavior/trajectory.hpp"
#include "wiredsys/error.hpp"

namespace wiredsys::security {

namespace {

nlohmann::json output_labels(const behavior::MooreMachine& m, const wd::Tuple& out) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t p = 0; p < out.size(); ++p) {
    j.push_back(std::get<wd::FiniteSet>(m.iface.outputs[p]).labels[out[p]]);
  }
  return j;
}

}  // namespace

const wd::Interface& behavior_iface(const Behavior& b) {
  if (std::holds_alternative<behavior::MooreMachine>(b)) {
    return std::get<behavior::MooreMachine>(b).iface;
  }
  return std::get<behavior::LTISystem>(b).iface;
}

bool observations_equal(const Observation& a, const Observation& b, double tol) {
  if (a.is_number() && b.is_number()) {
    return std::abs(a.get<double>() - b.get<double>()) <= tol;
  }
  if (a.type() != b.type()) return false;
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!observations_equal(a[i], b[i], tol)) return false;
    }
    return true;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return false;
      if (!observations_equal(it.value(), b[it.key()], tol)) return false;
    }
    return true;
  }
  return a == b;
}

SecurityTest terminal_test() {
  return {"terminal", [](const Behavior&) { return Observation("*"); }};
}

SecurityTest trace_test(std::string name, std::optional<std::string> init,
                        std::vector<wd::Tuple> inputs) {
  auto observe = [init, inputs](const Behavior& b) -> Observation {
    if (!std::holds_alternative<behavior::MooreMachine>(b)) {
      return Observation{{"error", "trace test requires a finite machine"}};
    }
    const auto& m = std::get<behavior::MooreMachine>(b);
    std::size_t s0 = m.init;
    if (init) {
      bool found = false;
      for (std::size_t s = 0; s < m.states.size(); ++s) {
        if (m.states[s] == *init) {
          s0 = s;
          found = true;
          break;
        }
      }
      if (!found) return Observation{{"error", "unknown state '" + *init + "'"}};
    }
    const auto tr = behavior::simulate(m, s0, inputs);
    Observation outs = nlohmann::json::array();
    for (const wd::Tuple& o : tr.outputs) outs.push_back(output_labels(m, o));
    return outs;
  };
  return {std::move(name), std::move(observe)};
}

SecurityTest lti_trace_test(std::string name, std::vector<Eigen::VectorXd> inputs) {
  auto observe = [inputs](const Behavior& b) -> Observation {
    if (!std::holds_alternative<behavior::LTISystem>(b)) {
      return Observation{{"error", "trace test requires a linear system"}};
    }
    const auto& l = std::get<behavior::LTISystem>(b);
    const auto tr = behavior::simulate(l, Eigen::VectorXd::Zero(l.state_dim()), inputs);
    Observation outs = nlohmann::json::array();
    for (const Eigen::VectorXd& o : tr.outputs) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index i = 0; i < o.size(); ++i) row.push_back(o(i));
      outs.push_back(row);
    }
    return outs;
  };
  return {std::move(name), std::move(observe)};
}

SecurityTest iotable_test(std::size_t horizon) {
  auto observe = [horizon](const Behavior& b) -> Observation {
    if (!std::holds_alternative<behavior::MooreMachine>(b)) {
      return Observation{{"error", "io-table test requires a finite machine"}};
    }
    const auto& m = std::get<behavior::MooreMachine>(b);
    const std::size_t in_count = m.input_count();

    Observation table = nlohmann::json::object();
    // Breadth-first over input sequences; each frontier entry carries the
    // reached state and its output history.
    struct Row {
      std::string key;
      std::size_t state;
      nlohmann::json outputs;
    };
    std::deque<Row> frontier;
    {
      nlohmann::json first = nlohmann::json::array();
      first.push_back(output_labels(m, m.readout[m.init]));
      frontier.push_back({"", m.init, std::move(first)});
    }
    for (std::size_t len = 0; len <= horizon && !frontier.empty(); ++len) {
      std::deque<Row> next;
      for (Row& row : frontier) {
        table[row.key] = row.outputs;
        if (len == horizon) continue;
        for (std::size_t x = 0; x < in_count; ++x) {
          Row ext;
          ext.key = row.key.empty() ? std::to_string(x) : row.key + "," + std::to_string(x);
          ext.state = m.update[row.state][x];
          ext.outputs = row.outputs;
          ext.outputs.push_back(output_labels(m, m.readout[ext.state]));
          next.push_back(std::move(ext));
        }
      }
      frontier = std::move(next);
    }
    return table;
  };
  return {"iotable(" + std::to_string(horizon) + ")", std::move(observe)};
}

std::vector<SecurityTest> builtin_tests(std::size_t horizon,
                                        const std::vector<std::vector<wd::Tuple>>& probes) {
  std::vector<SecurityTest> tests;
  tests.push_back(terminal_test());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    tests.push_back(trace_test("trace" + std::to_string(i), std::nullopt, probes[i]));
  }
  tests.push_back(iotable_test(horizon));
  return tests;
}

nlohmann::json run_tests(const Behavior& system, const std::vector<SecurityTest>& tests) {
  nlohmann::json record = nlohmann::json::object();
  for (const SecurityTest& t : tests) record[t.name] = t.observe(system);
  return record;
}

std::vector<std::string> yoneda_filter(const nlohmann::json& target_obs,
                                       const KnowledgeDatabase& kb,
                                       const std::vector<SecurityTest>& tests,
                                       double tol) {
  std::vector<std::string> candidates;
  for (const auto& [name, entry] : kb.entries) {
    const nlohmann::json obs = run_tests(entry, tests);
    bool all_equal = true;
    for (const SecurityTest& t : tests) {
      if (!target_obs.contains(t.name) ||
          !observations_equal(obs[t.name], target_obs[t.name], tol)) {
        all_equal = false;
        break;
      }
    }
    if (all_equal) candidates.push_back(name);
  }
  return candidates;
}

bool behavioral_equiv(const behavior::MooreMachine& m1, const behavior::MooreMachine& m2,
                      std::size_t s1, std::size_t s2) {
  if (!wd::same_ports(m1.iface, m2.iface)) {
    throw Error("behavioral_equiv: machines inhabit different interfaces");
  }
  if (s1 >= m1.state_count() || s2 >= m2.state_count()) {
    throw Error("behavioral_equiv: initial state out of range");
  }
  if (!behavior::validate_machine(m1).empty() || !behavior::validate_machine(m2).empty()) {
    throw Error("behavioral_equiv: malformed machine tables");
  }
  const std::size_t in_count = m1.input_count();

  std::set<std::pair<std::size_t, std::size_t>> related;
  std::deque<std::pair<std::size_t, std::size_t>> frontier{{s1, s2}};
  related.insert({s1, s2});
  while (!frontier.empty()) {
    const auto [a, b] = frontier.front();
    frontier.pop_front();
    if (m1.readout[a] != m2.readout[b]) return false;
    for (std::size_t x = 0; x < in_count; ++x) {
      const std::pair<std::size_t, std::size_t> succ{m1.update[a][x], m2.update[b][x]};
      if (related.insert(succ).second) frontier.push_back(succ);
    }
  }
  return true;
}

bool behavioral_equiv(const behavior::MooreMachine& m1, const behavior::MooreMachine& m2) {
  return behavioral_equiv(m1, m2, m1.init, m2.init);
}

std::optional<std::vector<wd::Tuple>> distinguishing_trace(
    const behavior::MooreMachine& m1, const behavior::MooreMachine& m2) {
  if (!wd::same_ports(m1.iface, m2.iface)) {
    throw Error("distinguishing_trace: machines inhabit different interfaces");
  }
  if (!behavior::validate_machine(m1).empty() || !behavior::validate_machine(m2).empty()) {
    throw Error("distinguishing_trace: malformed machine tables");
  }
  const std::size_t in_count = m1.input_count();

  struct Visit {
    std::size_t parent;  // index into the visit list
    std::size_t input;   // flat input index taken from the parent
  };
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{m1.init, m2.init}};
  std::vector<Visit> visits{{static_cast<std::size_t>(-1), 0}};
  seen[pairs[0]] = 0;

  for (std::size_t at = 0; at < pairs.size(); ++at) {
    const auto [a, b] = pairs[at];
    if (m1.readout[a] != m2.readout[b]) {
      std::vector<wd::Tuple> inputs;
      for (std::size_t i = at; visits[i].parent != static_cast<std::size_t>(-1);
           i = visits[i].parent) {
        inputs.push_back(wd::index_to_tuple(m1.iface.inputs, visits[i].input));
      }
      std::reverse(inputs.begin(), inputs.end());
      return inputs;
    }
    for (std::size_t x = 0; x < in_count; ++x) {
      const std::pair<std::size_t, std::size_t> succ{m1.update[a][x], m2.update[b][x]};
      if (seen.emplace(succ, pairs.size()).second) {
        pairs.push_back(succ);
        visits.push_back({at, x});
      }
    }
  }
  return std::nullopt;
}

}  // namespace wiredsys::security
