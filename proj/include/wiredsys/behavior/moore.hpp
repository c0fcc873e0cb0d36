#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wiredsys/wd/carrier.hpp"
#include "wiredsys/wd/ops.hpp"
#include "wiredsys/wd/types.hpp"

namespace wiredsys::behavior {

/// A finite Moore machine inhabiting a box with finite-set ports. The update
/// table is indexed by (state, flattened input tuple); readout maps each
/// state to an output tuple. Output depends on state only.
struct MooreMachine {
  wd::Interface iface;
  std::vector<std::string> states;
  std::size_t init = 0;
  /// update[s][x] = next state, x a flattened input index.
  std::vector<std::vector<std::size_t>> update;
  /// readout[s] = output tuple, one label index per output port.
  std::vector<wd::Tuple> readout;

  std::size_t input_count() const { return wd::carrier_size(iface.inputs); }
  std::size_t state_count() const { return states.size(); }
};

/// Missing or out-of-range table entries, reported as messages.
std::vector<std::string> validate_machine(const MooreMachine& m);

/// Same port types, state count, and tables under index alignment. State
/// labels and names are ignored.
bool machine_table_equal(const MooreMachine& a, const MooreMachine& b);

/// Parallel composite: states are ordered pairs (first machine's index most
/// significant), update and readout act componentwise.
MooreMachine moore_tensor(const MooreMachine& m1, const MooreMachine& m2);

/// The composite machine over a wiring: the state set is the product of the
/// component state sets; each step resolves every inner input from the outer
/// inputs and the current component readouts, then steps every component.
MooreMachine moore_apply(const wd::WiringDiagram& d,
                         const std::vector<MooreMachine>& machines);

/// A total finite function, used to inhabit a box as a memoryless system.
struct FiniteFn {
  wd::Interface iface;
  /// table[x] = output tuple, x a flattened input index.
  std::vector<wd::Tuple> table;
};

/// The one-step-delay machine of a function: states are the input tuples,
/// update replaces the state with the new input, readout applies the function.
MooreMachine embed_function(const FiniteFn& h);

/// Recovers the function a machine embeds, or reports why it is stateful:
/// requires states to stand for input tuples in carrier order with
/// update(s, x) = x. Throws Error otherwise.
FiniteFn extract_function(const MooreMachine& m);

}  // namespace wiredsys::behavior
