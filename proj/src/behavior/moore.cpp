#include "wiredsys/behavior/moore.hpp"

#include <algorithm>

#include "wiredsys/error.hpp"

namespace wiredsys::behavior {

namespace {

bool all_finite(const wd::Interface& iface) {
  auto fin = [](const wd::PortType& t) { return wd::is_finite(t); };
  return std::all_of(iface.inputs.begin(), iface.inputs.end(), fin) &&
         std::all_of(iface.outputs.begin(), iface.outputs.end(), fin);
}

}  // namespace

std::vector<std::string> validate_machine(const MooreMachine& m) {
  std::vector<std::string> issues;
  if (!all_finite(m.iface)) {
    issues.push_back("machine ports must all be finite-set typed");
    return issues;
  }
  if (m.states.empty()) issues.push_back("state list is empty");
  const std::size_t in_count = m.input_count();
  if (m.update.size() != m.states.size()) {
    issues.push_back("update table has " + std::to_string(m.update.size()) +
                     " state rows, expected " + std::to_string(m.states.size()));
  }
  for (std::size_t s = 0; s < m.update.size(); ++s) {
    if (m.update[s].size() != in_count) {
      issues.push_back("update row for state '" + m.states[s] + "' has " +
                       std::to_string(m.update[s].size()) + " entries, expected " +
                       std::to_string(in_count));
      continue;
    }
    for (std::size_t x = 0; x < in_count; ++x) {
      if (m.update[s][x] >= m.states.size()) {
        issues.push_back("update(" + m.states[s] + ", input " + std::to_string(x) +
                         ") is out of state range");
      }
    }
  }
  if (m.readout.size() != m.states.size()) {
    issues.push_back("readout table has " + std::to_string(m.readout.size()) +
                     " entries, expected " + std::to_string(m.states.size()));
  }
  for (std::size_t s = 0; s < m.readout.size(); ++s) {
    if (m.readout[s].size() != m.iface.outputs.size()) {
      issues.push_back("readout of state '" + m.states[s] + "' has wrong arity");
      continue;
    }
    for (std::size_t p = 0; p < m.readout[s].size(); ++p) {
      if (m.readout[s][p] >= wd::cardinality(m.iface.outputs[p])) {
        issues.push_back("readout of state '" + m.states[s] + "' port " +
                         std::to_string(p) + " is out of carrier range");
      }
    }
  }
  if (m.init >= m.states.size() && !m.states.empty()) {
    issues.push_back("initial state index out of range");
  }
  return issues;
}

bool machine_table_equal(const MooreMachine& a, const MooreMachine& b) {
  return wd::same_ports(a.iface, b.iface) && a.states.size() == b.states.size() &&
         a.update == b.update && a.readout == b.readout;
}

MooreMachine moore_tensor(const MooreMachine& m1, const MooreMachine& m2) {
  MooreMachine r;
  r.iface = wd::tensor_interface(m1.iface, m2.iface);
  const std::size_t n1 = m1.state_count(), n2 = m2.state_count();
  const std::size_t in1 = m1.input_count(), in2 = m2.input_count();
  r.states.reserve(n1 * n2);
  for (std::size_t s = 0; s < n1; ++s) {
    for (std::size_t t = 0; t < n2; ++t) {
      r.states.push_back("(" + m1.states[s] + "," + m2.states[t] + ")");
    }
  }
  r.init = m1.init * n2 + m2.init;
  r.update.assign(n1 * n2, std::vector<std::size_t>(in1 * in2, 0));
  r.readout.assign(n1 * n2, wd::Tuple{});
  for (std::size_t s = 0; s < n1; ++s) {
    for (std::size_t t = 0; t < n2; ++t) {
      const std::size_t st = s * n2 + t;
      for (std::size_t x = 0; x < in1; ++x) {
        for (std::size_t y = 0; y < in2; ++y) {
          r.update[st][x * in2 + y] = m1.update[s][x] * n2 + m2.update[t][y];
        }
      }
      wd::Tuple out = m1.readout[s];
      out.insert(out.end(), m2.readout[t].begin(), m2.readout[t].end());
      r.readout[st] = std::move(out);
    }
  }
  return r;
}

MooreMachine moore_apply(const wd::WiringDiagram& d,
                         const std::vector<MooreMachine>& machines) {
  if (machines.size() != d.inner.size()) {
    throw Error("moore_apply: expected one machine per inner box");
  }
  for (std::size_t b = 0; b < machines.size(); ++b) {
    if (!wd::same_ports(machines[b].iface, d.inner[b])) {
      throw Error("moore_apply: machine '" + machines[b].iface.name +
                  "' does not inhabit inner box " + std::to_string(b) + " (" +
                  d.inner[b].name + ")");
    }
    const auto issues = validate_machine(machines[b]);
    if (!issues.empty()) {
      throw Error("moore_apply: machine '" + machines[b].iface.name + "': " +
                  issues.front());
    }
  }
  if (!validate_diagram(d).empty()) throw Error("moore_apply: invalid wiring diagram");

  const std::size_t boxes = machines.size();
  std::vector<std::size_t> radix(boxes);
  std::size_t total_states = 1;
  for (std::size_t b = 0; b < boxes; ++b) {
    radix[b] = machines[b].state_count();
    total_states *= radix[b];
  }
  auto decode = [&](std::size_t s) {
    std::vector<std::size_t> parts(boxes);
    for (std::size_t b = boxes; b-- > 0;) {
      parts[b] = s % radix[b];
      s /= radix[b];
    }
    return parts;
  };

  MooreMachine r;
  r.iface = d.outer;
  r.iface.name = d.outer.name;
  if (boxes == 1) {
    r.states = machines[0].states;
  } else {
    r.states.reserve(total_states);
    for (std::size_t s = 0; s < total_states; ++s) {
      auto parts = decode(s);
      std::string label = "(";
      for (std::size_t b = 0; b < boxes; ++b) {
        if (b) label += ",";
        label += machines[b].states[parts[b]];
      }
      r.states.push_back(label + ")");
    }
  }
  {
    std::size_t init = 0;
    for (std::size_t b = 0; b < boxes; ++b) init = init * radix[b] + machines[b].init;
    r.init = init;
  }

  const std::size_t outer_in_count = wd::carrier_size(d.outer.inputs);
  r.update.assign(total_states, std::vector<std::size_t>(outer_in_count, 0));
  r.readout.assign(total_states, wd::Tuple{});

  for (std::size_t s = 0; s < total_states; ++s) {
    const auto parts = decode(s);
    // Current readouts, concatenated over boxes in list order.
    wd::Tuple inner_out;
    for (std::size_t b = 0; b < boxes; ++b) {
      const wd::Tuple& out = machines[b].readout[parts[b]];
      inner_out.insert(inner_out.end(), out.begin(), out.end());
    }
    r.readout[s] = wd::eval_outputs(d, inner_out);

    for (std::size_t x = 0; x < outer_in_count; ++x) {
      const wd::Tuple outer_in = wd::index_to_tuple(d.outer.inputs, x);
      const wd::Tuple inner_in = wd::eval_inputs(d, inner_out, outer_in);
      std::size_t next = 0, at = 0;
      for (std::size_t b = 0; b < boxes; ++b) {
        const std::size_t arity = d.inner[b].inputs.size();
        const wd::Tuple box_in(inner_in.begin() + at, inner_in.begin() + at + arity);
        at += arity;
        const std::size_t xi = wd::tuple_to_index(machines[b].iface.inputs, box_in);
        next = next * radix[b] + machines[b].update[parts[b]][xi];
      }
      r.update[s][x] = next;
    }
  }
  return r;
}

MooreMachine embed_function(const FiniteFn& h) {
  const std::size_t in_count = wd::carrier_size(h.iface.inputs);
  if (h.table.size() != in_count) throw Error("embed_function: table is not total");

  MooreMachine m;
  m.iface = h.iface;
  m.states.reserve(in_count);
  for (std::size_t x = 0; x < in_count; ++x) {
    const wd::Tuple t = wd::index_to_tuple(h.iface.inputs, x);
    std::string label;
    for (std::size_t p = 0; p < t.size(); ++p) {
      if (p) label += ",";
      label += std::get<wd::FiniteSet>(h.iface.inputs[p]).labels[t[p]];
    }
    m.states.push_back(t.size() == 1 ? label : "(" + label + ")");
  }
  m.update.assign(m.states.size(), std::vector<std::size_t>(in_count, 0));
  m.readout.assign(m.states.size(), wd::Tuple{});
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    for (std::size_t x = 0; x < in_count; ++x) m.update[s][x] = x;
    m.readout[s] = h.table[s];
  }
  return m;
}

FiniteFn extract_function(const MooreMachine& m) {
  const std::size_t in_count = m.input_count();
  if (m.state_count() != in_count) {
    throw Error("machine is stateful: state count " + std::to_string(m.state_count()) +
                " does not match input carrier size " + std::to_string(in_count));
  }
  for (std::size_t s = 0; s < m.state_count(); ++s) {
    for (std::size_t x = 0; x < in_count; ++x) {
      if (m.update[s][x] != x) {
        throw Error("machine is stateful: update does not replace state with input");
      }
    }
  }
  FiniteFn h;
  h.iface = m.iface;
  h.table.reserve(in_count);
  for (std::size_t x = 0; x < in_count; ++x) h.table.push_back(m.readout[x]);
  return h;
}

}  // namespace wiredsys::behavior
