#include "wiredsys/dsl/report.hpp"

#include <sstream>

#include "wiredsys/error.hpp"
#include "wiredsys/util/numfmt.hpp"

namespace wiredsys::dsl {

namespace {

using util::format_double;

std::string label_tuple(const std::vector<wd::PortType>& ports, const wd::Tuple& t) {
  std::string s = "(";
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (p) s += ",";
    s += std::get<wd::FiniteSet>(ports[p]).labels[t[p]];
  }
  return s + ")";
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json subset_json(const contracts::PortSubset& s, const wd::PortType& t) {
  if (std::holds_alternative<std::set<std::size_t>>(s.allowed)) {
    nlohmann::json labels = nlohmann::json::array();
    for (std::size_t i : std::get<std::set<std::size_t>>(s.allowed)) {
      labels.push_back(std::get<wd::FiniteSet>(t).labels[i]);
    }
    return labels;
  }
  const auto& coords = std::get<std::vector<contracts::IntervalSet>>(s.allowed);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : coords) {
    if (c.is_full()) {
      out.push_back("full");
      continue;
    }
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& [lo, hi] : c.parts()) parts.push_back({lo, hi});
    out.push_back(std::move(parts));
  }
  return out;
}

std::string source_name(const wd::WiringDiagram& d, const wd::Source& s) {
  if (std::holds_alternative<wd::OuterInput>(s)) {
    return "outer.in[" + std::to_string(std::get<wd::OuterInput>(s).port) + "]";
  }
  const auto& io = std::get<wd::InnerOutput>(s);
  return d.inner[io.box].name + "#" + std::to_string(io.box) + ".out[" +
         std::to_string(io.port) + "]";
}

}  // namespace

nlohmann::json machine_json(const behavior::MooreMachine& m) {
  nlohmann::json j;
  j["kind"] = "moore";
  j["states"] = m.states;
  j["init"] = m.states[m.init];
  nlohmann::json update = nlohmann::json::object();
  nlohmann::json readout = nlohmann::json::object();
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t x = 0; x < m.update[s].size(); ++x) {
      row[label_tuple(m.iface.inputs, wd::index_to_tuple(m.iface.inputs, x))] =
          m.states[m.update[s][x]];
    }
    update[m.states[s]] = std::move(row);
    readout[m.states[s]] = label_tuple(m.iface.outputs, m.readout[s]);
  }
  j["update"] = std::move(update);
  j["readout"] = std::move(readout);
  return j;
}

nlohmann::json system_json(const behavior::LTISystem& l) {
  nlohmann::json j;
  j["kind"] = "lti";
  j["n"] = l.state_dim();
  j["A"] = matrix_json(l.A);
  j["B"] = matrix_json(l.B);
  j["C"] = matrix_json(l.C);
  return j;
}

nlohmann::json behavior_json(const security::Behavior& b) {
  if (std::holds_alternative<behavior::MooreMachine>(b)) {
    return machine_json(std::get<behavior::MooreMachine>(b));
  }
  return system_json(std::get<behavior::LTISystem>(b));
}

nlohmann::json contract_json(const contracts::StaticContract& c) {
  nlohmann::json j;
  if (c.is_empty()) {
    j["kind"] = "empty";
    return j;
  }
  if (std::holds_alternative<contracts::FiniteRelation>(c.rep)) {
    const auto& r = std::get<contracts::FiniteRelation>(c.rep);
    j["kind"] = "relation";
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [in, out] : r.pairs) {
      pairs.push_back({label_tuple(r.iface.inputs, in), label_tuple(r.iface.outputs, out)});
    }
    j["pairs"] = std::move(pairs);
    return j;
  }
  if (std::holds_alternative<contracts::IndependentContract>(c.rep)) {
    const auto& ic = std::get<contracts::IndependentContract>(c.rep);
    j["kind"] = "independent";
    nlohmann::json in = nlohmann::json::array(), out = nlohmann::json::array();
    for (std::size_t p = 0; p < ic.inputs.size(); ++p) {
      in.push_back(subset_json(ic.inputs[p], ic.iface.inputs[p]));
    }
    for (std::size_t p = 0; p < ic.outputs.size(); ++p) {
      out.push_back(subset_json(ic.outputs[p], ic.iface.outputs[p]));
    }
    j["in"] = std::move(in);
    j["out"] = std::move(out);
    return j;
  }
  const auto& g = std::get<contracts::LinearGraphContract>(c.rep);
  j["kind"] = "linear-graph";
  j["H"] = matrix_json(g.H);
  return j;
}

nlohmann::json diagram_json(const wd::WiringDiagram& d) {
  nlohmann::json j;
  nlohmann::json inner = nlohmann::json::array();
  for (const auto& box : d.inner) {
    inner.push_back({{"name", box.name},
                     {"inputs", box.inputs.size()},
                     {"outputs", box.outputs.size()}});
  }
  j["inner"] = std::move(inner);
  j["outer"] = {{"name", d.outer.name},
                {"inputs", d.outer.inputs.size()},
                {"outputs", d.outer.outputs.size()}};
  nlohmann::json sources = nlohmann::json::object();
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (std::size_t p = 0; p < d.input_sources[b].size(); ++p) {
      sources[d.inner[b].name + "#" + std::to_string(b) + ".in[" + std::to_string(p) + "]"] =
          source_name(d, d.input_sources[b][p]);
    }
  }
  for (std::size_t k = 0; k < d.output_sources.size(); ++k) {
    sources["outer.out[" + std::to_string(k) + "]"] =
        source_name(d, wd::Source{d.output_sources[k]});
  }
  j["sources"] = std::move(sources);
  return j;
}

std::string machine_text(const behavior::MooreMachine& m) {
  std::ostringstream os;
  os << "moore machine, " << m.states.size() << " states, init " << m.states[m.init]
     << "\n";
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    os << "  " << m.states[s] << " -> " << label_tuple(m.iface.outputs, m.readout[s]);
    for (std::size_t x = 0; x < m.update[s].size(); ++x) {
      os << "  " << label_tuple(m.iface.inputs, wd::index_to_tuple(m.iface.inputs, x))
         << "=>" << m.states[m.update[s][x]];
    }
    os << "\n";
  }
  return os.str();
}

namespace {

std::string matrix_text(const char* name, const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os << name << " (" << m.rows() << "x" << m.cols() << "):\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << " ";
      os << format_double(m(r, c));
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::string system_text(const behavior::LTISystem& l) {
  std::ostringstream os;
  os << "lti system, state dimension " << l.state_dim() << "\n"
     << matrix_text("A", l.A) << matrix_text("B", l.B) << matrix_text("C", l.C);
  return os.str();
}

std::string behavior_text(const security::Behavior& b) {
  if (std::holds_alternative<behavior::MooreMachine>(b)) {
    return machine_text(std::get<behavior::MooreMachine>(b));
  }
  return system_text(std::get<behavior::LTISystem>(b));
}

std::string contract_text(const contracts::StaticContract& c) {
  return contract_json(c).dump(2) + "\n";
}

std::string diagram_text(const wd::WiringDiagram& d) {
  std::ostringstream os;
  os << "wiring: [";
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    if (b) os << ", ";
    os << d.inner[b].name;
  }
  os << "] -> " << d.outer.name << "\n";
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (std::size_t p = 0; p < d.input_sources[b].size(); ++p) {
      os << "  " << d.inner[b].name << "#" << b << ".in[" << p
         << "] <- " << source_name(d, d.input_sources[b][p]) << "\n";
    }
  }
  for (std::size_t k = 0; k < d.output_sources.size(); ++k) {
    os << "  outer.out[" << k << "] <- " << source_name(d, wd::Source{d.output_sources[k]})
       << "\n";
  }
  return os.str();
}

std::string trajectory_csv(const behavior::FiniteTrajectory& t,
                           const behavior::MooreMachine& m) {
  // Composite state labels carry commas; quote those cells.
  auto cell = [](const std::string& s) {
    return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
  };
  std::ostringstream os;
  os << "t,state";
  for (std::size_t p = 0; p < m.iface.inputs.size(); ++p) os << ",in" << p;
  for (std::size_t p = 0; p < m.iface.outputs.size(); ++p) os << ",out" << p;
  os << "\n";
  for (std::size_t step = 0; step < t.states.size(); ++step) {
    os << step << "," << cell(m.states[t.states[step]]);
    for (std::size_t p = 0; p < m.iface.inputs.size(); ++p) {
      os << ",";
      if (step < t.inputs.size()) {
        os << std::get<wd::FiniteSet>(m.iface.inputs[p]).labels[t.inputs[step][p]];
      }
    }
    for (std::size_t p = 0; p < m.iface.outputs.size(); ++p) {
      os << "," << std::get<wd::FiniteSet>(m.iface.outputs[p]).labels[t.outputs[step][p]];
    }
    os << "\n";
  }
  return os.str();
}

std::string trajectory_csv(const behavior::LinearTrajectory& t) {
  std::ostringstream os;
  const Eigen::Index n = t.states.empty() ? 0 : t.states[0].size();
  const Eigen::Index k = t.inputs.empty() ? 0 : t.inputs[0].size();
  const Eigen::Index l = t.outputs.empty() ? 0 : t.outputs[0].size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",s" << i;
  for (Eigen::Index i = 0; i < k; ++i) os << ",in" << i;
  for (Eigen::Index i = 0; i < l; ++i) os << ",out" << i;
  os << "\n";
  for (std::size_t step = 0; step < t.states.size(); ++step) {
    os << step;
    for (Eigen::Index i = 0; i < n; ++i) os << "," << format_double(t.states[step](i));
    for (Eigen::Index i = 0; i < k; ++i) {
      os << ",";
      if (step < t.inputs.size()) os << format_double(t.inputs[step](i));
    }
    for (Eigen::Index i = 0; i < l; ++i) os << "," << format_double(t.outputs[step](i));
    os << "\n";
  }
  return os.str();
}

ParsedTrajectory parse_trajectory_csv(const std::string& text, const wd::Interface& iface) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw Error("trajectory: empty CSV");
  // Skip a header row when the first cell is not a step number.
  if (!rows[0].empty() && rows[0][0] == "t") rows.erase(rows.begin());

  const bool finite = !iface.inputs.empty() ? wd::is_finite(iface.inputs[0])
                      : !iface.outputs.empty() && wd::is_finite(iface.outputs[0]);
  ParsedTrajectory out;
  out.is_finite = finite;

  if (finite) {
    const std::size_t nin = iface.inputs.size();
    const std::size_t nout = iface.outputs.size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& cells = rows[r];
      if (cells.size() < 1 + nin + nout) throw Error("trajectory: row too short");
      const std::size_t state_cols = cells.size() - 1 - nin - nout;
      wd::Tuple in, outv;
      bool has_input = true;
      for (std::size_t p = 0; p < nin; ++p) {
        const std::string& cell = cells[1 + state_cols + p];
        if (cell.empty()) {
          has_input = false;
          continue;
        }
        const auto& labels = std::get<wd::FiniteSet>(iface.inputs[p]).labels;
        const auto it = std::find(labels.begin(), labels.end(), cell);
        if (it == labels.end()) throw Error("trajectory: unknown label '" + cell + "'");
        in.push_back(static_cast<std::size_t>(it - labels.begin()));
      }
      for (std::size_t p = 0; p < nout; ++p) {
        const std::string& cell = cells[1 + state_cols + nin + p];
        const auto& labels = std::get<wd::FiniteSet>(iface.outputs[p]).labels;
        const auto it = std::find(labels.begin(), labels.end(), cell);
        if (it == labels.end()) throw Error("trajectory: unknown label '" + cell + "'");
        outv.push_back(static_cast<std::size_t>(it - labels.begin()));
      }
      if (has_input && in.size() == nin) out.finite.inputs.push_back(in);
      out.finite.outputs.push_back(outv);
      out.finite.states.push_back(0);  // states are not needed to judge contracts
    }
    return out;
  }

  const Eigen::Index nin = wd::total_dim(iface.inputs);
  const Eigen::Index nout = wd::total_dim(iface.outputs);
  for (const auto& cells : rows) {
    if (static_cast<Eigen::Index>(cells.size()) < 1 + nin + nout) {
      throw Error("trajectory: row too short");
    }
    const Eigen::Index state_cols =
        static_cast<Eigen::Index>(cells.size()) - 1 - nin - nout;
    Eigen::VectorXd s(state_cols), in(nin), outv(nout);
    for (Eigen::Index i = 0; i < state_cols; ++i) {
      s(i) = std::strtod(cells[1 + i].c_str(), nullptr);
    }
    bool has_input = true;
    for (Eigen::Index i = 0; i < nin; ++i) {
      const std::string& cell = cells[1 + state_cols + i];
      if (cell.empty()) {
        has_input = false;
        break;
      }
      in(i) = std::strtod(cell.c_str(), nullptr);
    }
    for (Eigen::Index i = 0; i < nout; ++i) {
      outv(i) = std::strtod(cells[1 + state_cols + nin + i].c_str(), nullptr);
    }
    out.linear.states.push_back(s);
    if (has_input) out.linear.inputs.push_back(in);
    out.linear.outputs.push_back(outv);
  }
  return out;
}

}  // namespace wiredsys::dsl
