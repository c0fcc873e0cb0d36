#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "wiredsys/contracts/static_contract.hpp"
#include "wiredsys/temporal/graph.hpp"

namespace wiredsys::temporal {

/// A per-interval-length family of allowed (input section, output section)
/// pairs, given as an executable predicate over equal-length sections.
/// Exhaustive operations are bounded by the declared horizon.
struct TimeContract {
  std::string name;
  FinGraph in_graph;
  FinGraph out_graph;
  std::size_t horizon = 16;
  std::function<bool(const Section&, const Section&)> membership;
};

/// Evaluates the contract on an equal-length pair within the horizon.
bool time_membership(const TimeContract& c, const Section& x, const Section& y);

/// Lifts a static contract over finite ports: a pair of sections is allowed
/// when every instantaneous (input, output) pair lies in the relation. The
/// wire graphs are complete graphs on the tuple carriers.
TimeContract lift_static(const contracts::StaticContract& r, std::size_t horizon = 16);

/// Same lift for contracts over sampled real wires: the carrier of each
/// graph is an explicit list of sample points (flattened port values).
TimeContract lift_static_sampled(const contracts::StaticContract& r,
                                 const std::vector<Eigen::VectorXd>& in_samples,
                                 const std::vector<Eigen::VectorXd>& out_samples,
                                 std::size_t horizon = 16, double tol = 1e-9);

/// "If the input is in `assume`, the output `delay` ticks later is in
/// `guarantee`." Obligations falling past the window's end do not trigger.
TimeContract window_contract(const std::vector<double>& in_samples,
                             const std::vector<double>& out_samples,
                             const contracts::IntervalSet& assume,
                             const contracts::IntervalSet& guarantee,
                             std::size_t delay, std::size_t horizon = 16);

/// "After the input pattern occurs, the response value appears within k
/// ticks." The obligation triggers only when the whole response window fits
/// inside the interval.
TimeContract implies_contract(const FinGraph& in_graph, const FinGraph& out_graph,
                              const std::vector<std::size_t>& pattern,
                              std::size_t response, std::size_t within,
                              std::size_t horizon = 16);

/// An explicitly tabulated contract: exactly the listed pairs are allowed,
/// keyed by length; lengths above the table's horizon are rejected.
TimeContract table_contract(const FinGraph& in_graph, const FinGraph& out_graph,
                            std::vector<std::pair<std::vector<std::size_t>,
                                                  std::vector<std::size_t>>> rows,
                            std::size_t horizon);

struct RestrictionViolation {
  std::size_t n = 0;  // member length
  std::size_t p = 0;  // window offset
  std::size_t m = 0;  // window length
  Section input;
  Section output;
};

struct RestrictionReport {
  bool closed = true;
  std::size_t pairs_checked = 0;
  std::vector<RestrictionViolation> violations;
};

/// Exhaustively verifies that every member pair restricts to a member pair,
/// for all lengths up to N and all subwindows.
RestrictionReport check_restriction_closed(const TimeContract& c, std::size_t N,
                                           std::size_t max_violations = 8);

}  // namespace wiredsys::temporal
