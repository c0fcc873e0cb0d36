#include <algorithm>
#include <sstream>

#include "wiredsys/dsl/model.hpp"
#include "wiredsys/util/numfmt.hpp"

namespace wiredsys::dsl {

namespace {

using util::format_double;

template <typename T>
std::vector<const T*> by_name(const std::vector<T>& decls) {
  std::vector<const T*> out;
  for (const T& d : decls) out.push_back(&d);
  std::sort(out.begin(), out.end(),
            [](const T* a, const T* b) { return a->name < b->name; });
  return out;
}

std::string label_of(const wd::PortType& t, std::size_t index) {
  return std::get<wd::FiniteSet>(t).labels[index];
}

std::string tuple_text(const std::vector<wd::PortType>& ports, const wd::Tuple& t) {
  std::string s = "(";
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (p) s += ", ";
    s += label_of(ports[p], t[p]);
  }
  return s + ")";
}

std::string matrix_text(const Eigen::MatrixXd& m) {
  std::string s = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) s += ", ";
    s += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) s += ", ";
      s += format_double(m(r, c));
    }
    s += "]";
  }
  return s + "]";
}

std::string interval_text(const contracts::IntervalSet& s) {
  if (s.is_full()) return "full";
  std::string out;
  for (std::size_t i = 0; i < s.parts().size(); ++i) {
    if (i) out += " \xE2\x88\xAA ";
    out += "[" + format_double(s.parts()[i].first) + ", " +
           format_double(s.parts()[i].second) + "]";
  }
  return out;
}

std::string subset_text(const contracts::PortSubset& s, const wd::PortType& t) {
  if (std::holds_alternative<std::set<std::size_t>>(s.allowed)) {
    if (s.is_full_for(t)) return "full";
    std::string out = "{";
    bool first = true;
    for (std::size_t label : std::get<std::set<std::size_t>>(s.allowed)) {
      if (!first) out += ", ";
      out += label_of(t, label);
      first = false;
    }
    return out + "}";
  }
  const auto& coords = std::get<std::vector<contracts::IntervalSet>>(s.allowed);
  return interval_text(coords.at(0));
}

std::string source_text(const WiringDecl& w, const wd::Source& s) {
  if (std::holds_alternative<wd::OuterInput>(s)) {
    return "outer.in[" + std::to_string(std::get<wd::OuterInput>(s).port) + "]";
  }
  const auto& io = std::get<wd::InnerOutput>(s);
  return w.inner_names[io.box] + ".out[" + std::to_string(io.port) + "]";
}

void render_wiring(std::ostringstream& os, const WiringDecl& w) {
  os << "wiring " << w.name << " : [";
  for (std::size_t b = 0; b < w.inner_names.size(); ++b) {
    if (b) os << ", ";
    os << w.inner_names[b];
  }
  os << "] -> " << w.outer_name << " {\n";
  for (std::size_t b = 0; b < w.diagram.inner.size(); ++b) {
    for (std::size_t p = 0; p < w.diagram.input_sources[b].size(); ++p) {
      os << "  " << w.inner_names[b] << ".in[" << p
         << "] <- " << source_text(w, w.diagram.input_sources[b][p]) << ";\n";
    }
  }
  for (std::size_t j = 0; j < w.diagram.output_sources.size(); ++j) {
    os << "  outer.out[" << j
       << "] <- " << source_text(w, wd::Source{w.diagram.output_sources[j]}) << ";\n";
  }
  os << "}\n";
}

void render_moore(std::ostringstream& os, const MooreDecl& d) {
  const auto& m = d.machine;
  os << "moore " << d.name << " for " << d.box << " {\n  states {";
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    if (s) os << ", ";
    os << m.states[s];
  }
  os << "};\n  init " << m.states[m.init] << ";\n  update {\n";
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    for (std::size_t x = 0; x < m.update[s].size(); ++x) {
      os << "    (" << m.states[s] << ", "
         << tuple_text(m.iface.inputs, wd::index_to_tuple(m.iface.inputs, x)) << ") -> "
         << m.states[m.update[s][x]] << ";\n";
    }
  }
  os << "  };\n  readout {\n";
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    os << "    " << m.states[s] << " -> " << tuple_text(m.iface.outputs, m.readout[s])
       << ";\n";
  }
  os << "  };\n}\n";
}

void render_contract(std::ostringstream& os, const ContractDecl& d) {
  os << "contract " << d.name << " for " << d.box << " = ";
  if (std::holds_alternative<contracts::FiniteRelation>(d.contract.rep)) {
    const auto& r = std::get<contracts::FiniteRelation>(d.contract.rep);
    os << "rel {";
    bool first = true;
    for (const auto& [in, out] : r.pairs) {
      os << (first ? "" : ",") << "\n  (";
      for (std::size_t p = 0; p < in.size(); ++p) {
        if (p) os << ", ";
        os << label_of(r.iface.inputs[p], in[p]);
      }
      os << " ; ";
      for (std::size_t p = 0; p < out.size(); ++p) {
        if (p) os << ", ";
        os << label_of(r.iface.outputs[p], out[p]);
      }
      os << ")";
      first = false;
    }
    os << (first ? "};\n" : "\n};\n");
    return;
  }
  const auto& c = std::get<contracts::IndependentContract>(d.contract.rep);
  os << "indep {\n";
  for (std::size_t p = 0; p < c.inputs.size(); ++p) {
    if (c.inputs[p].is_full_for(c.iface.inputs[p])) continue;
    os << "  in[" << p << "]: " << subset_text(c.inputs[p], c.iface.inputs[p]) << ";\n";
  }
  for (std::size_t p = 0; p < c.outputs.size(); ++p) {
    if (c.outputs[p].is_full_for(c.iface.outputs[p])) continue;
    os << "  out[" << p << "]: " << subset_text(c.outputs[p], c.iface.outputs[p]) << ";\n";
  }
  os << "};\n";
}

void render_timecontract(std::ostringstream& os, const TimeContractDecl& d) {
  os << "timecontract " << d.name << " for " << d.box << " = ";
  switch (d.kind) {
    case TimeContractDecl::Kind::Lift:
      os << "lift(" << d.lifted_contract << ");\n";
      break;
    case TimeContractDecl::Kind::Window:
      os << "window(assume=in[0] in " << interval_text(d.assume)
         << ", guarantee=out[0] in " << interval_text(d.guarantee)
         << ", delay=" << d.delay;
      if (!d.samples.empty()) {
        os << ", samples=[";
        for (std::size_t i = 0; i < d.samples.size(); ++i) {
          if (i) os << ", ";
          os << format_double(d.samples[i]);
        }
        os << "]";
      }
      os << ");\n";
      break;
    case TimeContractDecl::Kind::Implies:
      os << "implies(pattern=[";
      for (std::size_t i = 0; i < d.pattern.size(); ++i) {
        if (i) os << ", ";
        os << d.pattern[i];
      }
      os << "], response=" << d.response << ", within=" << d.within << ");\n";
      break;
    case TimeContractDecl::Kind::Table:
      os << "table(horizon=" << d.horizon << ") {\n";
      for (const auto& [in_word, out_word] : d.rows) {
        os << "  (";
        for (std::size_t i = 0; i < in_word.size(); ++i) {
          if (i) os << ", ";
          os << in_word[i];
        }
        os << " ; ";
        for (std::size_t i = 0; i < out_word.size(); ++i) {
          if (i) os << ", ";
          os << out_word[i];
        }
        os << ");\n";
      }
      os << "};\n";
      break;
  }
}

void render_test(std::ostringstream& os, const TestDecl& d) {
  os << "test " << d.name << " for " << d.box << " = ";
  switch (d.kind) {
    case TestDecl::Kind::Terminal:
      os << "terminal;\n";
      break;
    case TestDecl::Kind::Trace:
      os << "trace(";
      if (d.trace_init) os << "init=" << *d.trace_init << ", ";
      os << "inputs=[";
      for (std::size_t i = 0; i < d.trace_inputs.size(); ++i) {
        if (i) os << ", ";
        os << "(";
        for (std::size_t p = 0; p < d.trace_inputs[i].size(); ++p) {
          if (p) os << ", ";
          os << d.trace_inputs[i][p];
        }
        os << ")";
      }
      os << "]);\n";
      break;
    case TestDecl::Kind::IoTable:
      os << "iotable(horizon=" << d.horizon << ");\n";
      break;
  }
}

void render_attack(std::ostringstream& os, const AttackDecl& d) {
  os << "attack " << d.name << " on " << d.wiring << " {\n";
  if (!d.base.empty()) {
    os << "  base ";
    for (std::size_t b = 0; b < d.base.size(); ++b) {
      if (b) os << ", ";
      os << d.base[b];
    }
    os << ";\n";
  }
  for (const auto& [box, beh] : d.rewrites) {
    os << "  rewrite " << box << " with " << beh << ";\n";
  }
  if (!d.rewires.empty()) {
    os << "  rewire {\n";
    for (const auto& rw : d.rewires) {
      os << "    " << rw.box << ".in[" << rw.port << "] <- ";
      if (rw.const_label) {
        os << "const " << *rw.const_label;
      } else if (rw.from_outer) {
        os << "outer.in[" << *rw.from_outer << "]";
      } else {
        os << rw.from_box->first << ".out[" << rw.from_box->second << "]";
      }
      os << ";\n";
    }
    os << "  };\n";
  }
  os << "}\n";
}

}  // namespace

std::string render_model(const Model& m) {
  std::ostringstream os;
  for (const TypeDecl* t : by_name(m.types)) {
    if (wd::is_finite(t->type)) {
      os << "type " << t->name << " = fin {";
      const auto& labels = std::get<wd::FiniteSet>(t->type).labels;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) os << ", ";
        os << labels[i];
      }
      os << "};\n";
    } else {
      os << "type " << t->name << " = lin " << wd::dimension(t->type) << ";\n";
    }
  }
  for (const BoxDecl* b : by_name(m.boxes)) {
    os << "box " << b->name << " (in: ";
    for (std::size_t i = 0; i < b->input_types.size(); ++i) {
      if (i) os << ", ";
      os << b->input_types[i];
    }
    os << " ; out: ";
    for (std::size_t i = 0; i < b->output_types.size(); ++i) {
      if (i) os << ", ";
      os << b->output_types[i];
    }
    os << ");\n";
  }
  for (const WiringDecl* w : by_name(m.wirings)) render_wiring(os, *w);
  for (const MooreDecl* d : by_name(m.moores)) render_moore(os, *d);
  for (const LtiDecl* d : by_name(m.ltis)) {
    os << "lti " << d->name << " for " << d->box << " {\n  A = " << matrix_text(d->system.A)
       << ";\n  B = " << matrix_text(d->system.B) << ";\n  C = " << matrix_text(d->system.C)
       << ";\n}\n";
  }
  for (const FnDecl* d : by_name(m.fns)) {
    os << "fn " << d->name << " for " << d->box << " {\n  table {\n";
    for (std::size_t x = 0; x < d->fn.table.size(); ++x) {
      os << "    " << tuple_text(d->fn.iface.inputs, wd::index_to_tuple(d->fn.iface.inputs, x))
         << " -> " << tuple_text(d->fn.iface.outputs, d->fn.table[x]) << ";\n";
    }
    os << "  };\n}\n";
  }
  for (const LinFnDecl* d : by_name(m.linfns)) {
    os << "linfn " << d->name << " for " << d->box << " {\n  C = " << matrix_text(d->system.C)
       << ";\n}\n";
  }
  for (const ContractDecl* d : by_name(m.contracts)) render_contract(os, *d);
  for (const TimeContractDecl* d : by_name(m.timecontracts)) render_timecontract(os, *d);
  for (const TestDecl* d : by_name(m.tests)) render_test(os, *d);
  for (const KbDecl* d : by_name(m.kbs)) {
    os << "kb " << d->name << " for " << d->box << " {";
    for (std::size_t i = 0; i < d->entries.size(); ++i) {
      os << (i ? ", " : "") << d->entries[i];
    }
    os << "}\n";
  }
  for (const AttackDecl* d : by_name(m.attacks)) render_attack(os, *d);
  return os.str();
}

namespace {

template <typename T, typename Eq>
bool decls_equal(const std::vector<T>& xs, const std::vector<T>& ys, Eq&& eq) {
  if (xs.size() != ys.size()) return false;
  auto xs_sorted = by_name(xs);
  auto ys_sorted = by_name(ys);
  for (std::size_t i = 0; i < xs_sorted.size(); ++i) {
    if (xs_sorted[i]->name != ys_sorted[i]->name) return false;
    if (!eq(*xs_sorted[i], *ys_sorted[i])) return false;
  }
  return true;
}

bool rewire_equal(const AttackDecl::Rewire& a, const AttackDecl::Rewire& b) {
  return a.box == b.box && a.port == b.port && a.from_box == b.from_box &&
         a.from_outer == b.from_outer && a.const_label == b.const_label;
}

}  // namespace

bool model_equal(const Model& a, const Model& b) {
  return decls_equal(a.types, b.types,
                     [](const TypeDecl& x, const TypeDecl& y) {
                       return wd::type_equal(x.type, y.type);
                     }) &&
         decls_equal(a.boxes, b.boxes,
                     [](const BoxDecl& x, const BoxDecl& y) {
                       return x.input_types == y.input_types &&
                              x.output_types == y.output_types;
                     }) &&
         decls_equal(a.wirings, b.wirings,
                     [](const WiringDecl& x, const WiringDecl& y) {
                       return x.inner_names == y.inner_names &&
                              x.outer_name == y.outer_name &&
                              wd::diagram_equal(x.diagram, y.diagram);
                     }) &&
         decls_equal(a.moores, b.moores,
                     [](const MooreDecl& x, const MooreDecl& y) {
                       return x.box == y.box && x.machine.states == y.machine.states &&
                              x.machine.init == y.machine.init &&
                              x.machine.update == y.machine.update &&
                              x.machine.readout == y.machine.readout;
                     }) &&
         decls_equal(a.ltis, b.ltis,
                     [](const LtiDecl& x, const LtiDecl& y) {
                       return x.box == y.box &&
                              behavior::system_equal(x.system, y.system, 0.0);
                     }) &&
         decls_equal(a.fns, b.fns,
                     [](const FnDecl& x, const FnDecl& y) {
                       return x.box == y.box && x.fn.table == y.fn.table;
                     }) &&
         decls_equal(a.linfns, b.linfns,
                     [](const LinFnDecl& x, const LinFnDecl& y) {
                       return x.box == y.box &&
                              behavior::system_equal(x.system, y.system, 0.0);
                     }) &&
         decls_equal(a.contracts, b.contracts,
                     [](const ContractDecl& x, const ContractDecl& y) {
                       return x.box == y.box &&
                              contracts::contract_equal(x.contract, y.contract);
                     }) &&
         decls_equal(a.timecontracts, b.timecontracts,
                     [](const TimeContractDecl& x, const TimeContractDecl& y) {
                       return x.box == y.box && x.kind == y.kind &&
                              x.lifted_contract == y.lifted_contract &&
                              x.assume == y.assume && x.guarantee == y.guarantee &&
                              x.delay == y.delay && x.samples == y.samples &&
                              x.pattern == y.pattern && x.response == y.response &&
                              x.within == y.within && x.horizon == y.horizon &&
                              x.rows == y.rows;
                     }) &&
         decls_equal(a.tests, b.tests,
                     [](const TestDecl& x, const TestDecl& y) {
                       return x.box == y.box && x.kind == y.kind &&
                              x.trace_init == y.trace_init &&
                              x.trace_inputs == y.trace_inputs && x.horizon == y.horizon;
                     }) &&
         decls_equal(a.kbs, b.kbs,
                     [](const KbDecl& x, const KbDecl& y) {
                       return x.box == y.box && x.entries == y.entries;
                     }) &&
         decls_equal(a.attacks, b.attacks, [](const AttackDecl& x, const AttackDecl& y) {
           if (x.wiring != y.wiring || x.base != y.base || x.rewrites != y.rewrites ||
               x.rewires.size() != y.rewires.size()) {
             return false;
           }
           for (std::size_t i = 0; i < x.rewires.size(); ++i) {
             if (!rewire_equal(x.rewires[i], y.rewires[i])) return false;
           }
           return true;
         });
}

}  // namespace wiredsys::dsl
