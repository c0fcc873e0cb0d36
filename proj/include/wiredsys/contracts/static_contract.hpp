#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "wiredsys/behavior/lti.hpp"
#include "wiredsys/behavior/moore.hpp"
#include "wiredsys/behavior/trajectory.hpp"
#include "wiredsys/wd/carrier.hpp"
#include "wiredsys/wd/types.hpp"

namespace wiredsys::contracts {

/// A finite union of closed real intervals, kept sorted and merged. The full
/// line is the single interval [-inf, +inf].
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet full();
  static IntervalSet closed(double lo, double hi);
  static IntervalSet united(const std::vector<std::pair<double, double>>& parts);

  bool empty() const { return parts_.empty(); }
  bool is_full() const;
  bool contains(double x) const;
  IntervalSet intersect(const IntervalSet& other) const;
  const std::vector<std::pair<double, double>>& parts() const { return parts_; }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    return a.parts_ == b.parts_;
  }

 private:
  std::vector<std::pair<double, double>> parts_;
};

/// The allowed values on one wire: a label subset for a finite port, or one
/// interval union per coordinate for a linear port.
struct PortSubset {
  std::variant<std::set<std::size_t>, std::vector<IntervalSet>> allowed;

  static PortSubset full_for(const wd::PortType& t);
  static PortSubset of_labels(std::set<std::size_t> labels);
  static PortSubset of_intervals(std::vector<IntervalSet> coords);

  bool empty() const;
  bool is_full_for(const wd::PortType& t) const;
  bool contains_label(std::size_t label) const;
  bool contains_point(const Eigen::VectorXd& x) const;

  friend bool operator==(const PortSubset& a, const PortSubset& b) {
    return a.allowed == b.allowed;
  }
};

PortSubset intersect(const PortSubset& a, const PortSubset& b);

/// An explicit relation over finite-set ports: the set of allowable
/// (input tuple, output tuple) pairs.
struct FiniteRelation {
  wd::Interface iface;
  std::set<std::pair<wd::Tuple, wd::Tuple>> pairs;
};

/// A contract that factors into per-wire value subsets.
struct IndependentContract {
  wd::Interface iface;
  std::vector<PortSubset> inputs;
  std::vector<PortSubset> outputs;

  bool any_empty() const;
};

/// The graph of a linear map, {(x, Hx)}; the matrix is kept symbolically.
struct LinearGraphContract {
  wd::Interface iface;
  Eigen::MatrixXd H;
};

/// The contract with no allowable tuples at all. Kept as its own
/// representation: over a box with no ports the independent form cannot
/// express emptiness (a product over zero wires is a singleton).
struct EmptyContract {
  wd::Interface iface;
};

/// A static contract in one of its representations. An independent contract
/// with an empty wire subset also denotes the empty contract.
struct StaticContract {
  std::variant<FiniteRelation, IndependentContract, LinearGraphContract, EmptyContract>
      rep;

  const wd::Interface& iface() const;
  bool is_empty() const;

  static StaticContract empty(const wd::Interface& iface);
  static StaticContract full_independent(const wd::Interface& iface);
};

/// Structural equality after normalizing empties within one representation.
bool contract_equal(const StaticContract& a, const StaticContract& b);

/// Laxator: the product relation with the middle variables switched, so the
/// result relates concatenated inputs to concatenated outputs. Independent
/// pairs stay independent; mixed finite pairs are expanded.
StaticContract contract_tensor(const StaticContract& a, const StaticContract& b);

/// Expands an independent contract over finite ports into the relation it
/// denotes.
FiniteRelation expand_independent(const IndependentContract& c);

/// Views any contract over finite ports as an explicit relation.
FiniteRelation to_finite_relation(const StaticContract& c);

/// Membership of one instantaneous pair: label tuples for finite ports,
/// flattened port vectors for linear ones.
bool allows(const StaticContract& c, const wd::Tuple& in, const wd::Tuple& out);
bool allows(const StaticContract& c, const Eigen::VectorXd& in,
            const Eigen::VectorXd& out, double tol = 1e-9);

/// Pushes a relation on the tensored inner box forward along the wiring:
///   R_Y = { (y1, y2) | ∃x2 : (f_in(x2, y1), x2) ∈ R_X and f_out(x2) = y2 }.
FiniteRelation contract_apply_finite(const wd::WiringDiagram& d,
                                     const FiniteRelation& r);

/// Pushes per-box independent contracts forward along the wiring by grouping
/// wires at their shared source: a group's feasible set is the source's
/// output subset intersected with all its destinations' input subsets. Any
/// empty internal group collapses the composite to the empty contract.
///
/// The result is exact whenever no inner output feeds two outer outputs;
/// duplicated outer outputs make the true composite a diagonal, which the
/// product form can only over-approximate.
StaticContract contract_apply_independent(const wd::WiringDiagram& d,
                                          const std::vector<IndependentContract>& cs);

/// The maximally satisfied contract of a memoryless system: the graph of the
/// function it embeds. Stateful machines are rejected.
StaticContract maximal_contract(const behavior::FiniteFn& h);
StaticContract maximal_contract(const behavior::MooreMachine& m);
StaticContract maximal_contract(const behavior::LTISystem& l);

/// Instantaneous satisfaction of a contract along a trajectory. Steps pair
/// inputs[t] with outputs[t]; the trailing output (which has no matching
/// input) is checked against the contract's output projection only.
struct SatisfiesResult {
  bool ok = true;
  std::optional<std::size_t> first_violation;
};

SatisfiesResult satisfies(const behavior::FiniteTrajectory& t, const StaticContract& r);
SatisfiesResult satisfies(const behavior::LinearTrajectory& t, const StaticContract& r,
                          double tol = 1e-9);

}  // namespace wiredsys::contracts
