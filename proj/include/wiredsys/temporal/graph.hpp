#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wiredsys/wd/carrier.hpp"
#include "wiredsys/wd/types.hpp"

namespace wiredsys::temporal {

/// A finite directed multigraph typing a time-sensitive wire: paths of
/// length n are the signals that may flow over a discrete interval [0, n].
struct FinGraph {
  struct Edge {
    std::string label;
    std::size_t src = 0;
    std::size_t dst = 0;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;

  /// Out-edges of a vertex, by edge index.
  std::vector<std::size_t> edges_from(std::size_t v) const;
};

std::vector<std::string> validate_graph(const FinGraph& g);

/// A path of length n: n+1 vertices joined by n edges.
struct Section {
  FinGraph graph;
  std::vector<std::size_t> vertex_seq;  // n+1 entries
  std::vector<std::size_t> edge_seq;    // n entries

  std::size_t length() const { return edge_seq.size(); }
};

std::vector<std::string> validate_section(const Section& s);

bool section_equal(const Section& a, const Section& b);

/// The complete graph on a finite carrier: one vertex per element, one edge
/// per ordered pair, so n-paths are exactly the tuples of length n+1.
FinGraph complete_graph(const std::vector<std::string>& carrier);
FinGraph complete_graph(const wd::PortType& finite_type);

/// A section of a complete graph from a value-index sequence.
Section section_of_values(const FinGraph& k, const std::vector<std::size_t>& values);

/// The sub-path of length m starting at vertex position p.
Section restrict_section(const Section& s, std::size_t p, std::size_t m);

/// Concatenation of two paths sharing x's final and y's initial vertex.
Section glue_sections(const Section& x, const Section& y);

/// All sections of the given length, in lexicographic edge order.
std::vector<Section> enumerate_sections(const FinGraph& g, std::size_t length);

}  // namespace wiredsys::temporal
