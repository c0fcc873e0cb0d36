#include "wiredsys/wd/ops.hpp"

#include <string>

#include "wiredsys/error.hpp"

namespace wiredsys::wd {

namespace {

std::string port_name(const WiringDiagram& d, std::size_t box, std::size_t port,
                      bool input) {
  return d.inner[box].name + (input ? ".in[" : ".out[") + std::to_string(port) + "]";
}

// Type of a source, or nullptr when its indices are out of range.
const PortType* source_type(const WiringDiagram& d, const Source& s) {
  if (std::holds_alternative<OuterInput>(s)) {
    auto i = std::get<OuterInput>(s).port;
    if (i >= d.outer.inputs.size()) return nullptr;
    return &d.outer.inputs[i];
  }
  const auto& io = std::get<InnerOutput>(s);
  if (io.box >= d.inner.size()) return nullptr;
  if (io.port >= d.inner[io.box].outputs.size()) return nullptr;
  return &d.inner[io.box].outputs[io.port];
}

std::string describe_source(const WiringDiagram& d, const Source& s) {
  if (std::holds_alternative<OuterInput>(s)) {
    return "outer.in[" + std::to_string(std::get<OuterInput>(s).port) + "]";
  }
  const auto& io = std::get<InnerOutput>(s);
  if (io.box < d.inner.size()) return port_name(d, io.box, io.port, false);
  return "box[" + std::to_string(io.box) + "].out[" + std::to_string(io.port) + "]";
}

}  // namespace

ValidationReport validate_diagram(const WiringDiagram& d) {
  ValidationReport report;
  auto flag = [&report](std::string code, std::string message) {
    report.push_back({std::move(code), std::move(message)});
  };

  if (d.input_sources.size() != d.inner.size()) {
    flag("shape", "input assignment has " + std::to_string(d.input_sources.size()) +
                      " box entries, diagram has " + std::to_string(d.inner.size()) +
                      " inner boxes");
    return report;
  }

  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    if (d.input_sources[b].size() != d.inner[b].inputs.size()) {
      flag("totality", d.inner[b].name + " has " +
                           std::to_string(d.inner[b].inputs.size()) + " input ports but " +
                           std::to_string(d.input_sources[b].size()) + " sources");
      continue;
    }
    for (std::size_t p = 0; p < d.input_sources[b].size(); ++p) {
      const Source& s = d.input_sources[b][p];
      const PortType* st = source_type(d, s);
      if (st == nullptr) {
        flag("range", "source of " + port_name(d, b, p, true) + " is out of range");
        continue;
      }
      if (!type_equal(*st, d.inner[b].inputs[p])) {
        flag("type-mismatch", port_name(d, b, p, true) + " has type " +
                                  type_name(d.inner[b].inputs[p]) + " but its source " +
                                  describe_source(d, s) + " has type " + type_name(*st));
      }
    }
  }

  if (d.output_sources.size() != d.outer.outputs.size()) {
    flag("totality", "outer box has " + std::to_string(d.outer.outputs.size()) +
                         " output ports but " + std::to_string(d.output_sources.size()) +
                         " sources");
    return report;
  }
  for (std::size_t j = 0; j < d.output_sources.size(); ++j) {
    const Source s{d.output_sources[j]};
    const PortType* st = source_type(d, s);
    if (st == nullptr) {
      flag("range", "source of outer.out[" + std::to_string(j) + "] is out of range");
      continue;
    }
    if (!type_equal(*st, d.outer.outputs[j])) {
      flag("type-mismatch", "outer.out[" + std::to_string(j) + "] has type " +
                                type_name(d.outer.outputs[j]) + " but its source " +
                                describe_source(d, s) + " has type " + type_name(*st));
    }
  }
  return report;
}

WiringDiagram identity_diagram(const Interface& x) {
  WiringDiagram d;
  d.inner = {x};
  d.outer = x;
  d.input_sources.resize(1);
  for (std::size_t i = 0; i < x.inputs.size(); ++i) {
    d.input_sources[0].push_back(OuterInput{i});
  }
  for (std::size_t j = 0; j < x.outputs.size(); ++j) {
    d.output_sources.push_back(InnerOutput{0, j});
  }
  return d;
}

WiringDiagram tensor_diagrams(const WiringDiagram& f, const WiringDiagram& g) {
  WiringDiagram d;
  d.inner = f.inner;
  d.inner.insert(d.inner.end(), g.inner.begin(), g.inner.end());
  d.outer = tensor_interface(f.outer, g.outer);

  const std::size_t box_off = f.inner.size();
  const std::size_t in_off = f.outer.inputs.size();
  auto shift = [&](const Source& s) -> Source {
    if (std::holds_alternative<OuterInput>(s)) {
      return OuterInput{std::get<OuterInput>(s).port + in_off};
    }
    const auto& io = std::get<InnerOutput>(s);
    return InnerOutput{io.box + box_off, io.port};
  };

  d.input_sources = f.input_sources;
  for (const auto& box_sources : g.input_sources) {
    std::vector<Source> shifted;
    shifted.reserve(box_sources.size());
    for (const Source& s : box_sources) shifted.push_back(shift(s));
    d.input_sources.push_back(std::move(shifted));
  }

  d.output_sources = f.output_sources;
  for (const InnerOutput& io : g.output_sources) {
    d.output_sources.push_back(InnerOutput{io.box + box_off, io.port});
  }
  return d;
}

WiringDiagram compose_diagrams(const WiringDiagram& g, const WiringDiagram& f) {
  if (g.inner.size() != 1 || !same_ports(g.inner[0], f.outer)) {
    throw Error("compose: g's inner tensor must be the single box f.outer");
  }

  // A source seen from g's middle interface, pushed down to f's level.
  auto resolve_middle = [&](const Source& s) -> Source {
    if (std::holds_alternative<OuterInput>(s)) return s;  // outer input of g
    const auto& io = std::get<InnerOutput>(s);            // output of the middle box
    return Source{f.output_sources[io.port]};
  };

  WiringDiagram d;
  d.inner = f.inner;
  d.outer = g.outer;
  d.input_sources.resize(f.inner.size());
  for (std::size_t b = 0; b < f.inner.size(); ++b) {
    for (const Source& s : f.input_sources[b]) {
      if (std::holds_alternative<InnerOutput>(s)) {
        d.input_sources[b].push_back(s);
      } else {
        // Middle-interface input: chase through g's assignment.
        auto mid = std::get<OuterInput>(s).port;
        d.input_sources[b].push_back(resolve_middle(g.input_sources[0][mid]));
      }
    }
  }
  for (const InnerOutput& io : g.output_sources) {
    d.output_sources.push_back(f.output_sources[io.port]);
  }
  return d;
}

WiringDiagram as_single_box(const WiringDiagram& d) {
  Interface merged;
  merged.name = d.outer.name.empty() ? "inner" : d.outer.name + "-inner";
  std::vector<std::size_t> in_off(d.inner.size(), 0), out_off(d.inner.size(), 0);
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    in_off[b] = merged.inputs.size();
    out_off[b] = merged.outputs.size();
    merged.inputs.insert(merged.inputs.end(), d.inner[b].inputs.begin(),
                         d.inner[b].inputs.end());
    merged.outputs.insert(merged.outputs.end(), d.inner[b].outputs.begin(),
                          d.inner[b].outputs.end());
  }

  auto flatten = [&](const Source& s) -> Source {
    if (std::holds_alternative<OuterInput>(s)) return s;
    const auto& io = std::get<InnerOutput>(s);
    return InnerOutput{0, out_off[io.box] + io.port};
  };

  WiringDiagram r;
  r.inner = {merged};
  r.outer = d.outer;
  r.input_sources.resize(1);
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (const Source& s : d.input_sources[b]) {
      r.input_sources[0].push_back(flatten(s));
    }
  }
  for (const InnerOutput& io : d.output_sources) {
    r.output_sources.push_back(InnerOutput{0, out_off[io.box] + io.port});
  }
  return r;
}

WiringDiagram substitute(const WiringDiagram& parent, std::size_t slot,
                         const WiringDiagram& child) {
  if (slot >= parent.inner.size()) {
    throw Error("substitute: slot " + std::to_string(slot) + " out of range");
  }
  if (!same_ports(child.outer, parent.inner[slot])) {
    throw Error("substitute: child outer interface does not match slot " +
                std::to_string(slot) + " (" + parent.inner[slot].name + ")");
  }

  WiringDiagram r;
  r.inner.reserve(parent.inner.size() + child.inner.size() - 1);
  // New index of each surviving parent box.
  std::vector<std::size_t> parent_box(parent.inner.size(), 0);
  for (std::size_t b = 0; b < slot; ++b) {
    parent_box[b] = r.inner.size();
    r.inner.push_back(parent.inner[b]);
  }
  const std::size_t child_off = r.inner.size();
  r.inner.insert(r.inner.end(), child.inner.begin(), child.inner.end());
  for (std::size_t b = slot + 1; b < parent.inner.size(); ++b) {
    parent_box[b] = r.inner.size();
    r.inner.push_back(parent.inner[b]);
  }
  r.outer = parent.outer;

  // Parent-level source, rewritten to the spliced index space. A reference to
  // the erased slot's output resolves through child's output assignment.
  auto resolve_parent = [&](const Source& s) -> Source {
    if (std::holds_alternative<OuterInput>(s)) return s;
    const auto& io = std::get<InnerOutput>(s);
    if (io.box == slot) {
      const InnerOutput& c = child.output_sources[io.port];
      return InnerOutput{child_off + c.box, c.port};
    }
    return InnerOutput{parent_box[io.box], io.port};
  };
  // Child-level source: child-internal wires shift; child outer inputs are the
  // slot's inputs, which resolve at the parent level.
  auto resolve_child = [&](const Source& s) -> Source {
    if (std::holds_alternative<InnerOutput>(s)) {
      const auto& io = std::get<InnerOutput>(s);
      return InnerOutput{child_off + io.box, io.port};
    }
    auto slot_port = std::get<OuterInput>(s).port;
    return resolve_parent(parent.input_sources[slot][slot_port]);
  };

  r.input_sources.resize(r.inner.size());
  for (std::size_t b = 0; b < parent.inner.size(); ++b) {
    if (b == slot) continue;
    auto& dst = r.input_sources[parent_box[b]];
    for (const Source& s : parent.input_sources[b]) dst.push_back(resolve_parent(s));
  }
  for (std::size_t cb = 0; cb < child.inner.size(); ++cb) {
    auto& dst = r.input_sources[child_off + cb];
    for (const Source& s : child.input_sources[cb]) dst.push_back(resolve_child(s));
  }
  for (const InnerOutput& io : parent.output_sources) {
    r.output_sources.push_back(std::get<InnerOutput>(resolve_parent(Source{io})));
  }
  return r;
}

int total_dim(const std::vector<PortType>& ports) {
  int n = 0;
  for (const PortType& t : ports) {
    if (!is_linear(t)) throw Error("expected a linear port type");
    n += dimension(t);
  }
  return n;
}

int inner_input_dim(const WiringDiagram& d) {
  int n = 0;
  for (const Interface& box : d.inner) n += total_dim(box.inputs);
  return n;
}

int inner_output_dim(const WiringDiagram& d) {
  int n = 0;
  for (const Interface& box : d.inner) n += total_dim(box.outputs);
  return n;
}

SelectionMatrices wiring_to_matrices(const WiringDiagram& d) {
  const int in_dim = inner_input_dim(d);
  const int out_dim = inner_output_dim(d);
  const int outer_in = total_dim(d.outer.inputs);
  const int outer_out = total_dim(d.outer.outputs);

  // Flattened coordinate offset of each port, declared order, boxes in order.
  std::vector<std::vector<int>> in_base(d.inner.size()), out_base(d.inner.size());
  std::vector<int> outer_in_base(d.outer.inputs.size());
  {
    int acc = 0;
    for (std::size_t b = 0; b < d.inner.size(); ++b) {
      for (const PortType& t : d.inner[b].inputs) {
        in_base[b].push_back(acc);
        acc += dimension(t);
      }
    }
    acc = 0;
    for (std::size_t b = 0; b < d.inner.size(); ++b) {
      for (const PortType& t : d.inner[b].outputs) {
        out_base[b].push_back(acc);
        acc += dimension(t);
      }
    }
    acc = 0;
    for (std::size_t i = 0; i < d.outer.inputs.size(); ++i) {
      outer_in_base[i] = acc;
      acc += dimension(d.outer.inputs[i]);
    }
  }

  SelectionMatrices m;
  m.Af = Eigen::MatrixXd::Zero(in_dim, out_dim);
  m.Bf = Eigen::MatrixXd::Zero(in_dim, outer_in);
  m.Cf = Eigen::MatrixXd::Zero(outer_out, out_dim);

  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (std::size_t p = 0; p < d.inner[b].inputs.size(); ++p) {
      const int dim = dimension(d.inner[b].inputs[p]);
      const int row = in_base[b][p];
      const Source& s = d.input_sources[b][p];
      if (std::holds_alternative<OuterInput>(s)) {
        const int col = outer_in_base[std::get<OuterInput>(s).port];
        for (int t = 0; t < dim; ++t) m.Bf(row + t, col + t) = 1.0;
      } else {
        const auto& io = std::get<InnerOutput>(s);
        const int col = out_base[io.box][io.port];
        for (int t = 0; t < dim; ++t) m.Af(row + t, col + t) = 1.0;
      }
    }
  }
  {
    int row = 0;
    for (std::size_t j = 0; j < d.output_sources.size(); ++j) {
      const int dim = dimension(d.outer.outputs[j]);
      const InnerOutput& io = d.output_sources[j];
      const int col = out_base[io.box][io.port];
      for (int t = 0; t < dim; ++t) m.Cf(row + t, col + t) = 1.0;
      row += dim;
    }
  }
  return m;
}

std::vector<std::size_t> eval_inputs(const WiringDiagram& d,
                                     const std::vector<std::size_t>& inner_outputs,
                                     const std::vector<std::size_t>& outer_inputs) {
  // Flattened port offsets over finite wires.
  std::vector<std::vector<std::size_t>> out_base(d.inner.size());
  std::size_t acc = 0;
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (std::size_t p = 0; p < d.inner[b].outputs.size(); ++p) {
      out_base[b].push_back(acc++);
    }
  }
  if (inner_outputs.size() != acc) throw Error("eval_inputs: bad inner output tuple");

  std::vector<std::size_t> result;
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (const Source& s : d.input_sources[b]) {
      if (std::holds_alternative<OuterInput>(s)) {
        result.push_back(outer_inputs.at(std::get<OuterInput>(s).port));
      } else {
        const auto& io = std::get<InnerOutput>(s);
        result.push_back(inner_outputs[out_base[io.box][io.port]]);
      }
    }
  }
  return result;
}

std::vector<std::size_t> eval_outputs(const WiringDiagram& d,
                                      const std::vector<std::size_t>& inner_outputs) {
  std::vector<std::vector<std::size_t>> out_base(d.inner.size());
  std::size_t acc = 0;
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (std::size_t p = 0; p < d.inner[b].outputs.size(); ++p) {
      out_base[b].push_back(acc++);
    }
  }
  if (inner_outputs.size() != acc) throw Error("eval_outputs: bad inner output tuple");

  std::vector<std::size_t> result;
  for (const InnerOutput& io : d.output_sources) {
    result.push_back(inner_outputs[out_base[io.box][io.port]]);
  }
  return result;
}

}  // namespace wiredsys::wd
