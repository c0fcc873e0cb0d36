#include "wiredsys/contracts/static_contract.hpp"

#include <algorithm>
#include <limits>

#include "wiredsys/error.hpp"

namespace wiredsys::contracts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite_ports(const wd::Interface& iface) {
  auto fin = [](const wd::PortType& t) { return wd::is_finite(t); };
  return std::all_of(iface.inputs.begin(), iface.inputs.end(), fin) &&
         std::all_of(iface.outputs.begin(), iface.outputs.end(), fin);
}

wd::Interface tensored_inner(const wd::WiringDiagram& d) {
  wd::Interface t;
  for (const wd::Interface& box : d.inner) {
    t.inputs.insert(t.inputs.end(), box.inputs.begin(), box.inputs.end());
    t.outputs.insert(t.outputs.end(), box.outputs.begin(), box.outputs.end());
  }
  return t;
}

}  // namespace

IntervalSet IntervalSet::full() { return closed(-kInf, kInf); }

IntervalSet IntervalSet::closed(double lo, double hi) {
  IntervalSet s;
  if (lo <= hi) s.parts_.push_back({lo, hi});
  return s;
}

IntervalSet IntervalSet::united(const std::vector<std::pair<double, double>>& parts) {
  std::vector<std::pair<double, double>> sorted;
  for (const auto& p : parts) {
    if (p.first <= p.second) sorted.push_back(p);
  }
  std::sort(sorted.begin(), sorted.end());
  IntervalSet s;
  for (const auto& p : sorted) {
    if (!s.parts_.empty() && p.first <= s.parts_.back().second) {
      s.parts_.back().second = std::max(s.parts_.back().second, p.second);
    } else {
      s.parts_.push_back(p);
    }
  }
  return s;
}

bool IntervalSet::is_full() const {
  return parts_.size() == 1 && parts_[0].first == -kInf && parts_[0].second == kInf;
}

bool IntervalSet::contains(double x) const {
  for (const auto& p : parts_) {
    if (p.first <= x && x <= p.second) return true;
  }
  return false;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  IntervalSet r;
  for (const auto& a : parts_) {
    for (const auto& b : other.parts_) {
      const double lo = std::max(a.first, b.first);
      const double hi = std::min(a.second, b.second);
      if (lo <= hi) r.parts_.push_back({lo, hi});
    }
  }
  return united(r.parts_);
}

PortSubset PortSubset::full_for(const wd::PortType& t) {
  if (wd::is_finite(t)) {
    std::set<std::size_t> all;
    for (std::size_t i = 0; i < wd::cardinality(t); ++i) all.insert(i);
    return {all};
  }
  return {std::vector<IntervalSet>(static_cast<std::size_t>(wd::dimension(t)),
                                   IntervalSet::full())};
}

PortSubset PortSubset::of_labels(std::set<std::size_t> labels) {
  return {std::move(labels)};
}

PortSubset PortSubset::of_intervals(std::vector<IntervalSet> coords) {
  return {std::move(coords)};
}

bool PortSubset::empty() const {
  if (std::holds_alternative<std::set<std::size_t>>(allowed)) {
    return std::get<std::set<std::size_t>>(allowed).empty();
  }
  const auto& coords = std::get<std::vector<IntervalSet>>(allowed);
  return std::any_of(coords.begin(), coords.end(),
                     [](const IntervalSet& s) { return s.empty(); });
}

bool PortSubset::is_full_for(const wd::PortType& t) const {
  if (wd::is_finite(t)) {
    return std::holds_alternative<std::set<std::size_t>>(allowed) &&
           std::get<std::set<std::size_t>>(allowed).size() == wd::cardinality(t);
  }
  if (!std::holds_alternative<std::vector<IntervalSet>>(allowed)) return false;
  const auto& coords = std::get<std::vector<IntervalSet>>(allowed);
  return std::all_of(coords.begin(), coords.end(),
                     [](const IntervalSet& s) { return s.is_full(); });
}

bool PortSubset::contains_label(std::size_t label) const {
  return std::get<std::set<std::size_t>>(allowed).count(label) > 0;
}

bool PortSubset::contains_point(const Eigen::VectorXd& x) const {
  const auto& coords = std::get<std::vector<IntervalSet>>(allowed);
  if (static_cast<std::size_t>(x.size()) != coords.size()) {
    throw Error("port subset: coordinate count mismatch");
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!coords[i].contains(x(static_cast<Eigen::Index>(i)))) return false;
  }
  return true;
}

PortSubset intersect(const PortSubset& a, const PortSubset& b) {
  if (a.allowed.index() != b.allowed.index()) {
    throw Error("port subset: cannot intersect finite with linear");
  }
  if (std::holds_alternative<std::set<std::size_t>>(a.allowed)) {
    const auto& xs = std::get<std::set<std::size_t>>(a.allowed);
    const auto& ys = std::get<std::set<std::size_t>>(b.allowed);
    std::set<std::size_t> r;
    std::set_intersection(xs.begin(), xs.end(), ys.begin(), ys.end(),
                          std::inserter(r, r.begin()));
    return {std::move(r)};
  }
  const auto& xs = std::get<std::vector<IntervalSet>>(a.allowed);
  const auto& ys = std::get<std::vector<IntervalSet>>(b.allowed);
  if (xs.size() != ys.size()) throw Error("port subset: coordinate count mismatch");
  std::vector<IntervalSet> r;
  for (std::size_t i = 0; i < xs.size(); ++i) r.push_back(xs[i].intersect(ys[i]));
  return {std::move(r)};
}

bool IndependentContract::any_empty() const {
  auto is_empty = [](const PortSubset& s) { return s.empty(); };
  return std::any_of(inputs.begin(), inputs.end(), is_empty) ||
         std::any_of(outputs.begin(), outputs.end(), is_empty);
}

const wd::Interface& StaticContract::iface() const {
  if (std::holds_alternative<FiniteRelation>(rep)) {
    return std::get<FiniteRelation>(rep).iface;
  }
  if (std::holds_alternative<IndependentContract>(rep)) {
    return std::get<IndependentContract>(rep).iface;
  }
  if (std::holds_alternative<LinearGraphContract>(rep)) {
    return std::get<LinearGraphContract>(rep).iface;
  }
  return std::get<EmptyContract>(rep).iface;
}

bool StaticContract::is_empty() const {
  if (std::holds_alternative<FiniteRelation>(rep)) {
    return std::get<FiniteRelation>(rep).pairs.empty();
  }
  if (std::holds_alternative<IndependentContract>(rep)) {
    return std::get<IndependentContract>(rep).any_empty();
  }
  if (std::holds_alternative<LinearGraphContract>(rep)) {
    return false;  // a linear graph always contains (0, 0)
  }
  return true;
}

StaticContract StaticContract::empty(const wd::Interface& iface) {
  return {EmptyContract{iface}};
}

StaticContract StaticContract::full_independent(const wd::Interface& iface) {
  IndependentContract c;
  c.iface = iface;
  for (const wd::PortType& t : iface.inputs) c.inputs.push_back(PortSubset::full_for(t));
  for (const wd::PortType& t : iface.outputs) c.outputs.push_back(PortSubset::full_for(t));
  return {std::move(c)};
}

bool contract_equal(const StaticContract& a, const StaticContract& b) {
  if (!wd::same_ports(a.iface(), b.iface())) return false;
  if (a.is_empty() || b.is_empty()) return a.is_empty() == b.is_empty();
  if (a.rep.index() != b.rep.index()) {
    // A non-empty independent contract over finite ports still equals its
    // expansion as a relation.
    auto as_relation = [](const StaticContract& c) -> std::optional<FiniteRelation> {
      if (std::holds_alternative<FiniteRelation>(c.rep)) {
        return std::get<FiniteRelation>(c.rep);
      }
      if (std::holds_alternative<IndependentContract>(c.rep) &&
          all_finite_ports(c.iface())) {
        return expand_independent(std::get<IndependentContract>(c.rep));
      }
      return std::nullopt;
    };
    const auto ra = as_relation(a);
    const auto rb = as_relation(b);
    return ra && rb && ra->pairs == rb->pairs;
  }
  if (std::holds_alternative<FiniteRelation>(a.rep)) {
    return std::get<FiniteRelation>(a.rep).pairs == std::get<FiniteRelation>(b.rep).pairs;
  }
  if (std::holds_alternative<IndependentContract>(a.rep)) {
    const auto& x = std::get<IndependentContract>(a.rep);
    const auto& y = std::get<IndependentContract>(b.rep);
    return x.inputs == y.inputs && x.outputs == y.outputs;
  }
  const auto& x = std::get<LinearGraphContract>(a.rep);
  const auto& y = std::get<LinearGraphContract>(b.rep);
  return x.H.rows() == y.H.rows() && x.H.cols() == y.H.cols() &&
         (x.H.size() == 0 || (x.H - y.H).cwiseAbs().maxCoeff() == 0.0);
}

FiniteRelation expand_independent(const IndependentContract& c) {
  if (!all_finite_ports(c.iface)) {
    throw Error("expand_independent: finite ports required");
  }
  FiniteRelation r;
  r.iface = c.iface;
  if (c.any_empty()) return r;
  for (const wd::Tuple& in : wd::enumerate_carrier(c.iface.inputs)) {
    bool in_ok = true;
    for (std::size_t p = 0; p < in.size(); ++p) {
      in_ok = in_ok && c.inputs[p].contains_label(in[p]);
    }
    if (!in_ok) continue;
    for (const wd::Tuple& out : wd::enumerate_carrier(c.iface.outputs)) {
      bool out_ok = true;
      for (std::size_t p = 0; p < out.size(); ++p) {
        out_ok = out_ok && c.outputs[p].contains_label(out[p]);
      }
      if (out_ok) r.pairs.insert({in, out});
    }
  }
  return r;
}

FiniteRelation to_finite_relation(const StaticContract& c) {
  if (std::holds_alternative<FiniteRelation>(c.rep)) {
    return std::get<FiniteRelation>(c.rep);
  }
  if (std::holds_alternative<IndependentContract>(c.rep)) {
    return expand_independent(std::get<IndependentContract>(c.rep));
  }
  if (std::holds_alternative<EmptyContract>(c.rep)) {
    if (!all_finite_ports(c.iface())) {
      throw Error("to_finite_relation: finite ports required");
    }
    return FiniteRelation{c.iface(), {}};
  }
  throw Error("to_finite_relation: linear-graph contracts have no finite expansion");
}

StaticContract contract_tensor(const StaticContract& a, const StaticContract& b) {
  const wd::Interface iface = wd::tensor_interface(a.iface(), b.iface());

  if (a.is_empty() || b.is_empty()) return StaticContract::empty(iface);

  if (std::holds_alternative<IndependentContract>(a.rep) &&
      std::holds_alternative<IndependentContract>(b.rep)) {
    const auto& x = std::get<IndependentContract>(a.rep);
    const auto& y = std::get<IndependentContract>(b.rep);
    IndependentContract r;
    r.iface = iface;
    r.inputs = x.inputs;
    r.inputs.insert(r.inputs.end(), y.inputs.begin(), y.inputs.end());
    r.outputs = x.outputs;
    r.outputs.insert(r.outputs.end(), y.outputs.begin(), y.outputs.end());
    return {std::move(r)};
  }

  if (std::holds_alternative<LinearGraphContract>(a.rep) &&
      std::holds_alternative<LinearGraphContract>(b.rep)) {
    const auto& x = std::get<LinearGraphContract>(a.rep);
    const auto& y = std::get<LinearGraphContract>(b.rep);
    LinearGraphContract r;
    r.iface = iface;
    r.H = Eigen::MatrixXd::Zero(x.H.rows() + y.H.rows(), x.H.cols() + y.H.cols());
    r.H.topLeftCorner(x.H.rows(), x.H.cols()) = x.H;
    r.H.bottomRightCorner(y.H.rows(), y.H.cols()) = y.H;
    return {std::move(r)};
  }

  // Remaining combinations are handled over finite carriers as relations.
  auto to_relation = [](const StaticContract& c) -> FiniteRelation {
    if (std::holds_alternative<FiniteRelation>(c.rep)) {
      return std::get<FiniteRelation>(c.rep);
    }
    if (std::holds_alternative<IndependentContract>(c.rep)) {
      return expand_independent(std::get<IndependentContract>(c.rep));
    }
    throw Error("contract_tensor: cannot mix a linear graph with finite contracts");
  };
  const FiniteRelation x = to_relation(a);
  const FiniteRelation y = to_relation(b);
  FiniteRelation r;
  r.iface = iface;
  for (const auto& [x1, x2] : x.pairs) {
    for (const auto& [y1, y2] : y.pairs) {
      wd::Tuple in = x1;
      in.insert(in.end(), y1.begin(), y1.end());
      wd::Tuple out = x2;
      out.insert(out.end(), y2.begin(), y2.end());
      r.pairs.insert({std::move(in), std::move(out)});
    }
  }
  return {std::move(r)};
}

FiniteRelation contract_apply_finite(const wd::WiringDiagram& d, const FiniteRelation& r) {
  const wd::Interface inner = tensored_inner(d);
  if (!all_finite_ports(inner) || !all_finite_ports(d.outer)) {
    throw Error("contract_apply_finite: finite ports required");
  }
  if (!wd::same_ports(inner, r.iface)) {
    throw Error("contract_apply_finite: relation does not match the inner tensor");
  }

  FiniteRelation out;
  out.iface = d.outer;
  const auto outer_inputs = wd::enumerate_carrier(d.outer.inputs);
  for (const auto& [x1, x2] : r.pairs) {
    const wd::Tuple y2 = wd::eval_outputs(d, x2);
    for (const wd::Tuple& y1 : outer_inputs) {
      if (wd::eval_inputs(d, x2, y1) == x1) out.pairs.insert({y1, y2});
    }
  }
  return out;
}

StaticContract contract_apply_independent(const wd::WiringDiagram& d,
                                          const std::vector<IndependentContract>& cs) {
  if (cs.size() != d.inner.size()) {
    throw Error("contract_apply_independent: one contract per inner box required");
  }
  for (std::size_t b = 0; b < cs.size(); ++b) {
    if (!wd::same_ports(cs[b].iface, d.inner[b])) {
      throw Error("contract_apply_independent: contract does not match inner box " +
                  std::to_string(b));
    }
  }
  for (const IndependentContract& c : cs) {
    if (c.any_empty()) return StaticContract::empty(d.outer);
  }

  // Feasible set of each inner-output group: the source's output subset
  // intersected with the input subsets of every destination it feeds.
  std::vector<std::vector<PortSubset>> feasible(d.inner.size());
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    feasible[b] = cs[b].outputs;
  }
  // Outer inputs accumulate their destinations' subsets.
  std::vector<PortSubset> outer_in;
  for (const wd::PortType& t : d.outer.inputs) outer_in.push_back(PortSubset::full_for(t));

  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (std::size_t p = 0; p < d.input_sources[b].size(); ++p) {
      const PortSubset& dest = cs[b].inputs[p];
      const wd::Source& s = d.input_sources[b][p];
      if (std::holds_alternative<wd::OuterInput>(s)) {
        auto& acc = outer_in[std::get<wd::OuterInput>(s).port];
        acc = intersect(acc, dest);
      } else {
        const auto& io = std::get<wd::InnerOutput>(s);
        feasible[io.box][io.port] = intersect(feasible[io.box][io.port], dest);
      }
    }
  }

  // Any infeasible internal wire collapses the whole composite.
  for (std::size_t b = 0; b < d.inner.size(); ++b) {
    for (const PortSubset& f : feasible[b]) {
      if (f.empty()) return StaticContract::empty(d.outer);
    }
  }
  for (const PortSubset& s : outer_in) {
    if (s.empty()) return StaticContract::empty(d.outer);
  }

  IndependentContract r;
  r.iface = d.outer;
  r.inputs = std::move(outer_in);
  for (const wd::InnerOutput& io : d.output_sources) {
    r.outputs.push_back(feasible[io.box][io.port]);
  }
  return {std::move(r)};
}

StaticContract maximal_contract(const behavior::FiniteFn& h) {
  FiniteRelation r;
  r.iface = h.iface;
  for (std::size_t x = 0; x < h.table.size(); ++x) {
    r.pairs.insert({wd::index_to_tuple(h.iface.inputs, x), h.table[x]});
  }
  return {std::move(r)};
}

StaticContract maximal_contract(const behavior::MooreMachine& m) {
  return maximal_contract(behavior::extract_function(m));
}

StaticContract maximal_contract(const behavior::LTISystem& l) {
  const bool memoryless = l.A.isZero(0.0) && l.B.rows() == l.B.cols() &&
                          l.B.isIdentity(0.0);
  if (!memoryless) {
    throw Error("maximal_contract: system is stateful (A must be 0 and B the identity)");
  }
  LinearGraphContract g;
  g.iface = l.iface;
  g.H = l.C;
  return {std::move(g)};
}

namespace {

bool finite_pair_allowed(const StaticContract& r, const wd::Tuple& in,
                         const wd::Tuple& out) {
  if (std::holds_alternative<FiniteRelation>(r.rep)) {
    return std::get<FiniteRelation>(r.rep).pairs.count({in, out}) > 0;
  }
  if (std::holds_alternative<IndependentContract>(r.rep)) {
    const auto& c = std::get<IndependentContract>(r.rep);
    for (std::size_t p = 0; p < in.size(); ++p) {
      if (!c.inputs[p].contains_label(in[p])) return false;
    }
    for (std::size_t p = 0; p < out.size(); ++p) {
      if (!c.outputs[p].contains_label(out[p])) return false;
    }
    return true;
  }
  throw Error("satisfies: linear-graph contract cannot judge finite values");
}

bool finite_output_allowed(const StaticContract& r, const wd::Tuple& out) {
  if (std::holds_alternative<FiniteRelation>(r.rep)) {
    const auto& rel = std::get<FiniteRelation>(r.rep);
    return std::any_of(rel.pairs.begin(), rel.pairs.end(),
                       [&out](const auto& p) { return p.second == out; });
  }
  const auto& c = std::get<IndependentContract>(r.rep);
  for (std::size_t p = 0; p < out.size(); ++p) {
    if (!c.outputs[p].contains_label(out[p])) return false;
  }
  return true;
}

// Splits a flat value vector into per-port segments.
std::vector<Eigen::VectorXd> split_ports(const std::vector<wd::PortType>& ports,
                                         const Eigen::VectorXd& flat) {
  std::vector<Eigen::VectorXd> out;
  Eigen::Index at = 0;
  for (const wd::PortType& t : ports) {
    const Eigen::Index dim = wd::dimension(t);
    out.push_back(flat.segment(at, dim));
    at += dim;
  }
  if (at != flat.size()) throw Error("satisfies: value dimension mismatch");
  return out;
}

bool linear_pair_allowed(const StaticContract& r, const Eigen::VectorXd& in,
                         const Eigen::VectorXd& out, double tol) {
  if (std::holds_alternative<IndependentContract>(r.rep)) {
    const auto& c = std::get<IndependentContract>(r.rep);
    const auto ins = split_ports(c.iface.inputs, in);
    const auto outs = split_ports(c.iface.outputs, out);
    for (std::size_t p = 0; p < ins.size(); ++p) {
      if (!c.inputs[p].contains_point(ins[p])) return false;
    }
    for (std::size_t p = 0; p < outs.size(); ++p) {
      if (!c.outputs[p].contains_point(outs[p])) return false;
    }
    return true;
  }
  if (std::holds_alternative<LinearGraphContract>(r.rep)) {
    const auto& g = std::get<LinearGraphContract>(r.rep);
    return (out - g.H * in).cwiseAbs().maxCoeff() <= tol;
  }
  throw Error("satisfies: finite relation cannot judge real values");
}

bool linear_output_allowed(const StaticContract& r, const Eigen::VectorXd& out,
                           double tol) {
  if (std::holds_alternative<IndependentContract>(r.rep)) {
    const auto& c = std::get<IndependentContract>(r.rep);
    const auto outs = split_ports(c.iface.outputs, out);
    for (std::size_t p = 0; p < outs.size(); ++p) {
      if (!c.outputs[p].contains_point(outs[p])) return false;
    }
    return true;
  }
  const auto& g = std::get<LinearGraphContract>(r.rep);
  // Output projection of the graph is the column space of H.
  if (g.H.size() == 0) return out.cwiseAbs().maxCoeff() <= tol;
  const Eigen::VectorXd x = g.H.colPivHouseholderQr().solve(out);
  return (g.H * x - out).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

bool allows(const StaticContract& c, const wd::Tuple& in, const wd::Tuple& out) {
  if (c.is_empty()) return false;
  return finite_pair_allowed(c, in, out);
}

bool allows(const StaticContract& c, const Eigen::VectorXd& in,
            const Eigen::VectorXd& out, double tol) {
  if (c.is_empty()) return false;
  return linear_pair_allowed(c, in, out, tol);
}

SatisfiesResult satisfies(const behavior::FiniteTrajectory& t, const StaticContract& r) {
  if (r.is_empty() && !t.outputs.empty()) return {false, 0};
  for (std::size_t step = 0; step < t.inputs.size(); ++step) {
    if (!finite_pair_allowed(r, t.inputs[step], t.outputs[step])) {
      return {false, step};
    }
  }
  if (!t.outputs.empty() && t.outputs.size() == t.inputs.size() + 1) {
    if (!finite_output_allowed(r, t.outputs.back())) {
      return {false, t.inputs.size()};
    }
  }
  return {};
}

SatisfiesResult satisfies(const behavior::LinearTrajectory& t, const StaticContract& r,
                          double tol) {
  if (r.is_empty() && !t.outputs.empty()) return {false, 0};
  for (std::size_t step = 0; step < t.inputs.size(); ++step) {
    if (!linear_pair_allowed(r, t.inputs[step], t.outputs[step], tol)) {
      return {false, step};
    }
  }
  if (!t.outputs.empty() && t.outputs.size() == t.inputs.size() + 1) {
    if (!linear_output_allowed(r, t.outputs.back(), tol)) {
      return {false, t.inputs.size()};
    }
  }
  return {};
}

}  // namespace wiredsys::contracts
