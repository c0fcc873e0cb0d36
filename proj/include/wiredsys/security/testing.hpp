#pragma once

#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wiredsys/behavior/lti.hpp"
#include "wiredsys/behavior/moore.hpp"

namespace wiredsys::security {

/// A system inhabiting a box, as far as the attacker model is concerned.
using Behavior = std::variant<behavior::MooreMachine, behavior::LTISystem>;

const wd::Interface& behavior_iface(const Behavior& b);

/// The attacker's finite collection of known systems for one interface.
struct KnowledgeDatabase {
  wd::Interface iface;
  std::vector<std::pair<std::string, Behavior>> entries;
};

/// Test outcomes are JSON values: deterministic, comparable, and printable.
using Observation = nlohmann::json;

/// Numeric leaves compare within the tolerance; everything else exactly.
bool observations_equal(const Observation& a, const Observation& b, double tol = 1e-9);

/// An observation procedure on systems of a fixed interface. Observing the
/// same system twice yields the same value.
struct SecurityTest {
  std::string name;
  std::function<Observation(const Behavior&)> observe;
};

/// The maximally uninformative test: every system observes to the same value.
SecurityTest terminal_test();

/// Output sequence from an initial state under a fixed input sequence.
/// When init is unset, the system's own designated initial state is used; a
/// named state missing from a machine yields an error-marker observation.
SecurityTest trace_test(std::string name, std::optional<std::string> init,
                        std::vector<wd::Tuple> inputs);

/// Trace test over real-valued wires, from the zero state.
SecurityTest lti_trace_test(std::string name, std::vector<Eigen::VectorXd> inputs);

/// The full map from input sequences of length <= horizon (from the
/// designated initial state) to output sequences. Injective on observable
/// behavior up to the horizon; only defined for finite machines.
SecurityTest iotable_test(std::size_t horizon);

/// The standard battery: terminal, one trace test per probe sequence, and
/// the io-table at the given horizon.
std::vector<SecurityTest> builtin_tests(std::size_t horizon,
                                        const std::vector<std::vector<wd::Tuple>>& probes);

/// Runs every test; the record maps test names to observations.
nlohmann::json run_tests(const Behavior& system, const std::vector<SecurityTest>& tests);

/// Knowledge-database entries whose observations agree with the target's on
/// every test. May be empty (the target is unknown) or contain several
/// entries (the tests are too coarse).
std::vector<std::string> yoneda_filter(const nlohmann::json& target_obs,
                                       const KnowledgeDatabase& kb,
                                       const std::vector<SecurityTest>& tests,
                                       double tol = 1e-9);

/// Pointed bisimilarity of deterministic finite machines, decided on the
/// reachable product: related states must agree on readouts and stay related
/// under every input.
bool behavioral_equiv(const behavior::MooreMachine& m1, const behavior::MooreMachine& m2,
                      std::size_t s1, std::size_t s2);

/// Same, from the designated initial states.
bool behavioral_equiv(const behavior::MooreMachine& m1, const behavior::MooreMachine& m2);

/// A shortest input sequence on which the two machines' output traces
/// diverge (empty when the initial readouts already differ), or nothing when
/// the machines are behaviorally equivalent.
std::optional<std::vector<wd::Tuple>> distinguishing_trace(
    const behavior::MooreMachine& m1, const behavior::MooreMachine& m2);

}  // namespace wiredsys::security
