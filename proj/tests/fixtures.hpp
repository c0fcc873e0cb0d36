#pragma once

// Shared wirings, component systems, and random-instance generators used
// across the test suites.

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "wiredsys/behavior/lti.hpp"
#include "wiredsys/behavior/moore.hpp"
#include "wiredsys/wd/ops.hpp"
#include "wiredsys/wd/types.hpp"

namespace fixtures {

using namespace wiredsys;

inline wd::PortType real1() { return wd::LinSpace{1}; }

inline wd::PortType boolean() {
  return wd::FiniteSet{"bool", {"f", "t"}};
}

// Sensor/controller/dynamics decomposition of the airframe model: L reads the
// current state s and environment e, C turns the predicted state s' and the
// desired state d into a control action c, D turns c into the next state s.
// Outer inputs are (e, d); the only outer output is s.
inline wd::WiringDiagram uav_wiring() {
  wd::Interface L{"L", {real1(), real1()}, {real1()}};
  wd::Interface C{"C", {real1(), real1()}, {real1()}};
  wd::Interface D{"D", {real1()}, {real1()}};
  wd::Interface UAV{"UAV", {real1(), real1()}, {real1()}};

  wd::WiringDiagram d;
  d.inner = {L, C, D};
  d.outer = UAV;
  d.input_sources = {
      {wd::InnerOutput{2, 0}, wd::OuterInput{0}},   // L: s from D, e from outside
      {wd::InnerOutput{0, 0}, wd::OuterInput{1}},   // C: s' from L, d from outside
      {wd::InnerOutput{1, 0}},                      // D: c from C
  };
  d.output_sources = {wd::InnerOutput{2, 0}};       // UAV emits s
  return d;
}

// Longitudinal dynamics of the fixed-wing airframe: states (a, q, theta),
// input the elevator deflection, output the pitch angle.
inline behavior::LTISystem uav_dynamics() {
  behavior::LTISystem D;
  D.iface = {"D", {real1()}, {real1()}};
  D.A.resize(3, 3);
  D.A << -0.313, 56.7, 0.0,
         -0.0139, -0.426, 0.0,
          0.0, 56.7, 0.0;
  D.B.resize(3, 1);
  D.B << 0.232, 0.0203, 0.0;
  D.C.resize(1, 3);
  D.C << 0.0, 0.0, 1.0;
  return D;
}

// Signal-concatenation placeholders for the sensor and controller: both are
// the memoryless sum of their two inputs.
inline behavior::LTISystem uav_sensor() {
  Eigen::MatrixXd H(1, 2);
  H << 1.0, 1.0;
  return behavior::embed_linear({"L", {real1(), real1()}, {real1()}}, H);
}

inline behavior::LTISystem uav_controller() {
  Eigen::MatrixXd H(1, 2);
  H << 1.0, 1.0;
  return behavior::embed_linear({"C", {real1(), real1()}, {real1()}}, H);
}

// Three boxes X, Y, Z with Z consuming both of their outputs plus a third
// outer input; only Z's output is exposed.
inline wd::WiringDiagram three_box_wiring(const wd::PortType& wire) {
  wd::Interface X{"X", {wire}, {wire}};
  wd::Interface Y{"Y", {wire}, {wire}};
  wd::Interface Z{"Z", {wire, wire, wire}, {wire}};
  wd::Interface A{"A", {wire, wire, wire}, {wire}};

  wd::WiringDiagram d;
  d.inner = {X, Y, Z};
  d.outer = A;
  d.input_sources = {
      {wd::OuterInput{0}},
      {wd::OuterInput{1}},
      {wd::InnerOutput{0, 0}, wd::InnerOutput{1, 0}, wd::OuterInput{2}},
  };
  d.output_sources = {wd::InnerOutput{2, 0}};
  return d;
}

// Two boxes in series: outer input feeds X, X feeds Y, Y feeds the output.
inline wd::WiringDiagram serial_wiring(const wd::PortType& wire) {
  wd::Interface X{"X", {wire}, {wire}};
  wd::Interface Y{"Y", {wire}, {wire}};
  wd::Interface A{"A", {wire}, {wire}};

  wd::WiringDiagram d;
  d.inner = {X, Y};
  d.outer = A;
  d.input_sources = {{wd::OuterInput{0}}, {wd::InnerOutput{0, 0}}};
  d.output_sources = {wd::InnerOutput{1, 0}};
  return d;
}

// The "not" machine over booleans: two states remembering the last input,
// readout negating it.
inline behavior::MooreMachine not_machine() {
  behavior::MooreMachine m;
  m.iface = {"N", {boolean()}, {boolean()}};
  m.states = {"s1", "s2"};
  m.update = {{1, 0}, {1, 0}};  // u(s, 0) = s2, u(s, 1) = s1
  m.readout = {{0}, {1}};       // r(s1) = 0, r(s2) = 1
  return m;
}

// The sensor subsystem opened up: two units I and G each read both sensor
// inputs; a processor P merges their outputs into the sensor's output.
inline wd::WiringDiagram sensor_decomposition_wiring() {
  const wd::PortType b = boolean();
  wd::Interface I{"I", {b, b}, {b}};
  wd::Interface G{"G", {b, b}, {b}};
  wd::Interface P{"P", {b, b}, {b}};
  wd::Interface L{"L", {b, b}, {b}};

  wd::WiringDiagram d;
  d.inner = {I, G, P};
  d.outer = L;
  d.input_sources = {
      {wd::OuterInput{0}, wd::OuterInput{1}},
      {wd::OuterInput{0}, wd::OuterInput{1}},
      {wd::InnerOutput{0, 0}, wd::InnerOutput{1, 0}},
  };
  d.output_sources = {wd::InnerOutput{2, 0}};
  return d;
}

// A bisimilar variant with every state split into two identical copies;
// successors alternate between the copies.
inline behavior::MooreMachine duplicate_states(const behavior::MooreMachine& m) {
  behavior::MooreMachine r;
  r.iface = m.iface;
  const std::size_t n = m.state_count();
  for (std::size_t s = 0; s < n; ++s) {
    r.states.push_back(m.states[s] + "#a");
    r.states.push_back(m.states[s] + "#b");
  }
  r.init = 2 * m.init;
  const std::size_t in_count = m.input_count();
  r.update.assign(2 * n, std::vector<std::size_t>(in_count, 0));
  r.readout.assign(2 * n, wd::Tuple{});
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t copy = 0; copy < 2; ++copy) {
      for (std::size_t x = 0; x < in_count; ++x) {
        r.update[2 * s + copy][x] = 2 * m.update[s][x] + (copy ^ 1u);
      }
      r.readout[2 * s + copy] = m.readout[s];
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Random instances for the property suites.

struct DiagramGenOptions {
  std::size_t max_boxes = 3;
  std::size_t max_ports = 2;      // per side per box
  std::size_t max_outer_in = 2;
  std::size_t max_outer_out = 2;
  std::vector<wd::PortType> type_pool = {
      wd::FiniteSet{"b", {"0", "1"}},
      wd::FiniteSet{"t", {"a", "b", "c"}},
  };
  bool allow_duplicated_outer_outputs = true;
};

// A random well-formed diagram: every inner input picks a uniformly random
// type-compatible source, so duplication, discarding, and feedback all occur.
inline wd::WiringDiagram random_diagram(std::mt19937& rng, const DiagramGenOptions& opt) {
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  wd::WiringDiagram d;
  const std::size_t boxes = 1 + pick(opt.max_boxes);
  for (std::size_t b = 0; b < boxes; ++b) {
    wd::Interface box;
    box.name = "B" + std::to_string(b);
    const std::size_t nin = pick(opt.max_ports + 1);
    const std::size_t nout = pick(opt.max_ports + 1);
    for (std::size_t p = 0; p < nin; ++p) box.inputs.push_back(opt.type_pool[pick(opt.type_pool.size())]);
    for (std::size_t p = 0; p < nout; ++p) box.outputs.push_back(opt.type_pool[pick(opt.type_pool.size())]);
    d.inner.push_back(box);
  }

  d.outer.name = "A";
  const std::size_t outer_in = pick(opt.max_outer_in + 1);
  for (std::size_t i = 0; i < outer_in; ++i) {
    d.outer.inputs.push_back(opt.type_pool[pick(opt.type_pool.size())]);
  }
  // Guarantee every inner-input type has at least one source.
  for (const wd::Interface& box : d.inner) {
    for (const wd::PortType& t : box.inputs) {
      bool found = false;
      for (const wd::PortType& u : d.outer.inputs) found = found || wd::type_equal(t, u);
      for (const wd::Interface& other : d.inner) {
        for (const wd::PortType& u : other.outputs) found = found || wd::type_equal(t, u);
      }
      if (!found) d.outer.inputs.push_back(t);
    }
  }

  d.input_sources.resize(boxes);
  for (std::size_t b = 0; b < boxes; ++b) {
    for (const wd::PortType& t : d.inner[b].inputs) {
      std::vector<wd::Source> candidates;
      for (std::size_t i = 0; i < d.outer.inputs.size(); ++i) {
        if (wd::type_equal(d.outer.inputs[i], t)) candidates.push_back(wd::OuterInput{i});
      }
      for (std::size_t ob = 0; ob < boxes; ++ob) {
        for (std::size_t p = 0; p < d.inner[ob].outputs.size(); ++p) {
          if (wd::type_equal(d.inner[ob].outputs[p], t)) {
            candidates.push_back(wd::InnerOutput{ob, p});
          }
        }
      }
      d.input_sources[b].push_back(candidates[pick(candidates.size())]);
    }
  }

  std::vector<wd::InnerOutput> all_outputs;
  for (std::size_t b = 0; b < boxes; ++b) {
    for (std::size_t p = 0; p < d.inner[b].outputs.size(); ++p) {
      all_outputs.push_back(wd::InnerOutput{b, p});
    }
  }
  if (!all_outputs.empty()) {
    const std::size_t outer_out = pick(opt.max_outer_out + 1);
    std::vector<bool> used(all_outputs.size(), false);
    for (std::size_t j = 0; j < outer_out; ++j) {
      std::size_t k = pick(all_outputs.size());
      if (!opt.allow_duplicated_outer_outputs) {
        std::size_t tries = 0;
        while (used[k] && tries++ < 8) k = pick(all_outputs.size());
        if (used[k]) continue;
        used[k] = true;
      }
      const wd::InnerOutput io = all_outputs[k];
      d.outer.outputs.push_back(d.inner[io.box].outputs[io.port]);
      d.output_sources.push_back(io);
    }
  }
  return d;
}

// A one-box diagram around the given middle interface, for composition chains.
inline wd::WiringDiagram random_enclosure(std::mt19937& rng, const wd::Interface& mid,
                                          const DiagramGenOptions& opt) {
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  wd::WiringDiagram g;
  g.inner = {mid};
  g.outer.name = mid.name + "'";
  const std::size_t outer_in = pick(opt.max_outer_in + 1);
  for (std::size_t i = 0; i < outer_in; ++i) {
    g.outer.inputs.push_back(opt.type_pool[pick(opt.type_pool.size())]);
  }
  for (const wd::PortType& t : mid.inputs) {
    bool found = false;
    for (const wd::PortType& u : g.outer.inputs) found = found || wd::type_equal(t, u);
    for (const wd::PortType& u : mid.outputs) found = found || wd::type_equal(t, u);
    if (!found) g.outer.inputs.push_back(t);
  }
  g.input_sources.resize(1);
  for (const wd::PortType& t : mid.inputs) {
    std::vector<wd::Source> candidates;
    for (std::size_t i = 0; i < g.outer.inputs.size(); ++i) {
      if (wd::type_equal(g.outer.inputs[i], t)) candidates.push_back(wd::OuterInput{i});
    }
    for (std::size_t p = 0; p < mid.outputs.size(); ++p) {
      if (wd::type_equal(mid.outputs[p], t)) candidates.push_back(wd::InnerOutput{0, p});
    }
    g.input_sources[0].push_back(candidates[pick(candidates.size())]);
  }
  if (!mid.outputs.empty()) {
    const std::size_t outer_out = pick(opt.max_outer_out + 1);
    for (std::size_t j = 0; j < outer_out; ++j) {
      const std::size_t p = pick(mid.outputs.size());
      g.outer.outputs.push_back(mid.outputs[p]);
      g.output_sources.push_back(wd::InnerOutput{0, p});
    }
  }
  return g;
}

// A random implementation of a fixed outer interface: inner boxes are drawn
// so that every input has a type-compatible source. Falls back to the
// identity when an outer output type cannot be produced.
inline wd::WiringDiagram random_child(std::mt19937& rng, const wd::Interface& outer,
                                      const DiagramGenOptions& opt) {
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  wd::WiringDiagram d;
  d.outer = outer;
  const std::size_t boxes = 1 + pick(opt.max_boxes);
  for (std::size_t b = 0; b < boxes; ++b) {
    wd::Interface box;
    box.name = outer.name + "-" + std::to_string(b);
    const std::size_t nout = pick(opt.max_ports + 1);
    for (std::size_t p = 0; p < nout; ++p) {
      box.outputs.push_back(opt.type_pool[pick(opt.type_pool.size())]);
    }
    d.inner.push_back(box);
  }
  // Available source types are now fixed; draw each input's type from them.
  std::vector<wd::PortType> source_types = outer.inputs;
  for (const wd::Interface& box : d.inner) {
    source_types.insert(source_types.end(), box.outputs.begin(), box.outputs.end());
  }
  if (!source_types.empty()) {
    for (wd::Interface& box : d.inner) {
      const std::size_t nin = pick(opt.max_ports + 1);
      for (std::size_t p = 0; p < nin; ++p) {
        box.inputs.push_back(source_types[pick(source_types.size())]);
      }
    }
  }

  d.input_sources.resize(boxes);
  for (std::size_t b = 0; b < boxes; ++b) {
    for (const wd::PortType& t : d.inner[b].inputs) {
      std::vector<wd::Source> candidates;
      for (std::size_t i = 0; i < d.outer.inputs.size(); ++i) {
        if (wd::type_equal(d.outer.inputs[i], t)) candidates.push_back(wd::OuterInput{i});
      }
      for (std::size_t ob = 0; ob < boxes; ++ob) {
        for (std::size_t p = 0; p < d.inner[ob].outputs.size(); ++p) {
          if (wd::type_equal(d.inner[ob].outputs[p], t)) {
            candidates.push_back(wd::InnerOutput{ob, p});
          }
        }
      }
      d.input_sources[b].push_back(candidates[pick(candidates.size())]);
    }
  }
  for (const wd::PortType& t : outer.outputs) {
    std::vector<wd::InnerOutput> candidates;
    for (std::size_t ob = 0; ob < boxes; ++ob) {
      for (std::size_t p = 0; p < d.inner[ob].outputs.size(); ++p) {
        if (wd::type_equal(d.inner[ob].outputs[p], t)) {
          candidates.push_back(wd::InnerOutput{ob, p});
        }
      }
    }
    if (candidates.empty()) return wd::identity_diagram(outer);
    d.output_sources.push_back(candidates[pick(candidates.size())]);
  }
  return d;
}

// A random total machine for a finite-typed box.
inline behavior::MooreMachine random_machine(std::mt19937& rng, const wd::Interface& iface,
                                             std::size_t max_states = 3) {
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  behavior::MooreMachine m;
  m.iface = iface;
  const std::size_t ns = 1 + pick(max_states);
  for (std::size_t s = 0; s < ns; ++s) m.states.push_back("s" + std::to_string(s));
  m.init = pick(ns);
  const std::size_t in_count = m.input_count();
  m.update.assign(ns, std::vector<std::size_t>(in_count, 0));
  m.readout.assign(ns, wd::Tuple{});
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t x = 0; x < in_count; ++x) m.update[s][x] = pick(ns);
    for (const wd::PortType& t : iface.outputs) {
      m.readout[s].push_back(pick(wd::cardinality(t)));
    }
  }
  return m;
}

}  // namespace fixtures
