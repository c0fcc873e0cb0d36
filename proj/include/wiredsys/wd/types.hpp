#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace wiredsys::wd {

/// A wire type carried by one port: a named finite set of value labels.
struct FiniteSet {
  std::string name;
  std::vector<std::string> labels;
};

/// A wire type carried by one port: the real linear space of a fixed dimension.
struct LinSpace {
  int dim = 1;
};

/// Port types compare structurally: two finite sets are the same type when
/// their label lists coincide (the set name is display metadata), two linear
/// spaces when their dimensions match.
using PortType = std::variant<FiniteSet, LinSpace>;

bool is_finite(const PortType& t);
bool is_linear(const PortType& t);

/// Number of labels of a finite port type.
std::size_t cardinality(const PortType& t);

/// Real dimension of a linear port type.
int dimension(const PortType& t);

bool type_equal(const PortType& a, const PortType& b);

std::string type_name(const PortType& t);

/// A labeled box: ordered, typed input and output ports. Either list may be
/// empty; the box with no ports at all is the monoidal unit.
struct Interface {
  std::string name;
  std::vector<PortType> inputs;
  std::vector<PortType> outputs;
};

/// Structural equality of port lists; interface names are ignored.
bool same_ports(const Interface& a, const Interface& b);

/// Parallel placement of two interfaces (port lists concatenated).
Interface tensor_interface(const Interface& a, const Interface& b);

/// Source of a value inside a wiring diagram: an input port of the outer box.
struct OuterInput {
  std::size_t port = 0;
};

/// Source of a value inside a wiring diagram: an output port of an inner box.
struct InnerOutput {
  std::size_t box = 0;
  std::size_t port = 0;
};

using Source = std::variant<OuterInput, InnerOutput>;

bool source_equal(const Source& a, const Source& b);

/// A wiring diagram: a morphism from the tensor of the inner boxes to the
/// outer box. Every inner input port and every outer output port names
/// exactly one source; a source may feed any number of destinations,
/// including none. Feedback wires are permitted.
struct WiringDiagram {
  std::vector<Interface> inner;
  Interface outer;
  /// input_sources[b][p] is the source feeding inner box b's input port p.
  std::vector<std::vector<Source>> input_sources;
  /// output_sources[j] is the inner output feeding outer output port j.
  std::vector<InnerOutput> output_sources;
};

/// Structural equality: port types and assignments, ignoring all names.
bool diagram_equal(const WiringDiagram& a, const WiringDiagram& b);

/// One well-formedness violation found by validate_diagram.
struct Violation {
  std::string code;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

}  // namespace wiredsys::wd
