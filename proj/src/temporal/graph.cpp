#include "wiredsys/temporal/graph.hpp"

#include <set>

#include "wiredsys/error.hpp"

namespace wiredsys::temporal {

std::vector<std::size_t> FinGraph::edges_from(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].src == v) out.push_back(e);
  }
  return out;
}

std::vector<std::string> validate_graph(const FinGraph& g) {
  std::vector<std::string> issues;
  std::set<std::string> vseen(g.vertices.begin(), g.vertices.end());
  if (vseen.size() != g.vertices.size()) issues.push_back("vertex labels are not distinct");
  std::set<std::string> eseen;
  for (const auto& e : g.edges) {
    if (!eseen.insert(e.label).second) {
      issues.push_back("edge label '" + e.label + "' is not distinct");
    }
    if (e.src >= g.vertices.size() || e.dst >= g.vertices.size()) {
      issues.push_back("edge '" + e.label + "' has an undeclared endpoint");
    }
  }
  return issues;
}

std::vector<std::string> validate_section(const Section& s) {
  std::vector<std::string> issues;
  if (s.vertex_seq.size() != s.edge_seq.size() + 1) {
    issues.push_back("a length-n section needs n+1 vertices");
    return issues;
  }
  for (std::size_t i = 0; i < s.edge_seq.size(); ++i) {
    if (s.edge_seq[i] >= s.graph.edges.size()) {
      issues.push_back("edge index out of range at position " + std::to_string(i));
      continue;
    }
    const auto& e = s.graph.edges[s.edge_seq[i]];
    if (e.src != s.vertex_seq[i] || e.dst != s.vertex_seq[i + 1]) {
      issues.push_back("edge at position " + std::to_string(i) +
                       " does not join its neighbouring vertices");
    }
  }
  for (std::size_t v : s.vertex_seq) {
    if (v >= s.graph.vertices.size()) issues.push_back("vertex index out of range");
  }
  return issues;
}

bool section_equal(const Section& a, const Section& b) {
  return a.vertex_seq == b.vertex_seq && a.edge_seq == b.edge_seq;
}

FinGraph complete_graph(const std::vector<std::string>& carrier) {
  FinGraph g;
  g.vertices = carrier;
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    for (std::size_t j = 0; j < carrier.size(); ++j) {
      g.edges.push_back({carrier[i] + ">" + carrier[j], i, j});
    }
  }
  return g;
}

FinGraph complete_graph(const wd::PortType& finite_type) {
  if (!wd::is_finite(finite_type)) {
    throw Error("complete_graph: finite carrier required");
  }
  return complete_graph(std::get<wd::FiniteSet>(finite_type).labels);
}

Section section_of_values(const FinGraph& k, const std::vector<std::size_t>& values) {
  if (values.empty()) throw Error("section_of_values: need at least one value");
  const std::size_t n = k.vertices.size();
  Section s;
  s.graph = k;
  s.vertex_seq = values;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i] >= n || values[i + 1] >= n) {
      throw Error("section_of_values: value out of carrier range");
    }
    s.edge_seq.push_back(values[i] * n + values[i + 1]);
  }
  return s;
}

Section restrict_section(const Section& s, std::size_t p, std::size_t m) {
  if (p + m > s.length()) {
    throw Error("restrict_section: window [" + std::to_string(p) + ", " +
                std::to_string(p + m) + "] exceeds length " + std::to_string(s.length()));
  }
  Section r;
  r.graph = s.graph;
  r.vertex_seq.assign(s.vertex_seq.begin() + p, s.vertex_seq.begin() + p + m + 1);
  r.edge_seq.assign(s.edge_seq.begin() + p, s.edge_seq.begin() + p + m);
  return r;
}

Section glue_sections(const Section& x, const Section& y) {
  if (x.vertex_seq.back() != y.vertex_seq.front()) {
    throw Error("glue_sections: endpoint mismatch");
  }
  Section r;
  r.graph = x.graph;
  r.vertex_seq = x.vertex_seq;
  r.vertex_seq.insert(r.vertex_seq.end(), y.vertex_seq.begin() + 1, y.vertex_seq.end());
  r.edge_seq = x.edge_seq;
  r.edge_seq.insert(r.edge_seq.end(), y.edge_seq.begin(), y.edge_seq.end());
  return r;
}

std::vector<Section> enumerate_sections(const FinGraph& g, std::size_t length) {
  std::vector<Section> done;
  std::vector<Section> frontier;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    Section s;
    s.graph = g;
    s.vertex_seq = {v};
    frontier.push_back(std::move(s));
  }
  for (std::size_t step = 0; step < length; ++step) {
    std::vector<Section> next;
    for (const Section& s : frontier) {
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (g.edges[e].src != s.vertex_seq.back()) continue;
        Section ext = s;
        ext.edge_seq.push_back(e);
        ext.vertex_seq.push_back(g.edges[e].dst);
        next.push_back(std::move(ext));
      }
    }
    frontier = std::move(next);
  }
  done = std::move(frontier);
  return done;
}

}  // namespace wiredsys::temporal
