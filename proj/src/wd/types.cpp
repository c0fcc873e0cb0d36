#include "wiredsys/wd/types.hpp"

#include <algorithm>

namespace wiredsys::wd {

bool is_finite(const PortType& t) { return std::holds_alternative<FiniteSet>(t); }

bool is_linear(const PortType& t) { return std::holds_alternative<LinSpace>(t); }

std::size_t cardinality(const PortType& t) {
  return std::get<FiniteSet>(t).labels.size();
}

int dimension(const PortType& t) { return std::get<LinSpace>(t).dim; }

bool type_equal(const PortType& a, const PortType& b) {
  if (a.index() != b.index()) return false;
  if (is_finite(a)) {
    return std::get<FiniteSet>(a).labels == std::get<FiniteSet>(b).labels;
  }
  return std::get<LinSpace>(a).dim == std::get<LinSpace>(b).dim;
}

std::string type_name(const PortType& t) {
  if (is_finite(t)) {
    const auto& f = std::get<FiniteSet>(t);
    return f.name.empty() ? "fin(" + std::to_string(f.labels.size()) + ")" : f.name;
  }
  return "lin " + std::to_string(std::get<LinSpace>(t).dim);
}

bool same_ports(const Interface& a, const Interface& b) {
  auto lists_equal = [](const std::vector<PortType>& xs, const std::vector<PortType>& ys) {
    return xs.size() == ys.size() &&
           std::equal(xs.begin(), xs.end(), ys.begin(), type_equal);
  };
  return lists_equal(a.inputs, b.inputs) && lists_equal(a.outputs, b.outputs);
}

Interface tensor_interface(const Interface& a, const Interface& b) {
  Interface t;
  if (a.name.empty()) {
    t.name = b.name;
  } else if (b.name.empty()) {
    t.name = a.name;
  } else {
    t.name = a.name + "*" + b.name;
  }
  t.inputs = a.inputs;
  t.inputs.insert(t.inputs.end(), b.inputs.begin(), b.inputs.end());
  t.outputs = a.outputs;
  t.outputs.insert(t.outputs.end(), b.outputs.begin(), b.outputs.end());
  return t;
}

bool source_equal(const Source& a, const Source& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<OuterInput>(a)) {
    return std::get<OuterInput>(a).port == std::get<OuterInput>(b).port;
  }
  const auto& x = std::get<InnerOutput>(a);
  const auto& y = std::get<InnerOutput>(b);
  return x.box == y.box && x.port == y.port;
}

bool diagram_equal(const WiringDiagram& a, const WiringDiagram& b) {
  if (a.inner.size() != b.inner.size()) return false;
  for (std::size_t i = 0; i < a.inner.size(); ++i) {
    if (!same_ports(a.inner[i], b.inner[i])) return false;
  }
  if (!same_ports(a.outer, b.outer)) return false;
  if (a.input_sources.size() != b.input_sources.size()) return false;
  for (std::size_t i = 0; i < a.input_sources.size(); ++i) {
    if (a.input_sources[i].size() != b.input_sources[i].size()) return false;
    for (std::size_t p = 0; p < a.input_sources[i].size(); ++p) {
      if (!source_equal(a.input_sources[i][p], b.input_sources[i][p])) return false;
    }
  }
  if (a.output_sources.size() != b.output_sources.size()) return false;
  for (std::size_t j = 0; j < a.output_sources.size(); ++j) {
    if (!source_equal(Source{a.output_sources[j]}, Source{b.output_sources[j]})) return false;
  }
  return true;
}

}  // namespace wiredsys::wd
