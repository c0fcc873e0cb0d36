#pragma once

#include <Eigen/Dense>

#include "wiredsys/wd/types.hpp"

namespace wiredsys::wd {

/// Checks totality, index ranges, type preservation, and the direction rule
/// (outer outputs may only be fed from inner outputs). An empty report means
/// the diagram is a well-formed morphism.
ValidationReport validate_diagram(const WiringDiagram& d);

/// The identity morphism on x: one inner copy of x, wired straight through.
WiringDiagram identity_diagram(const Interface& x);

/// Parallel placement; g's box and port indices are offset past f's.
WiringDiagram tensor_diagrams(const WiringDiagram& f, const WiringDiagram& g);

/// Composition g ∘ f, defined when g's inner list is the single box f.outer.
/// Sources are resolved by chasing through f's outputs and g's assignments.
WiringDiagram compose_diagrams(const WiringDiagram& g, const WiringDiagram& f);

/// Re-views the inner tensor factorization as one box, flattening port
/// indices. The result is the same morphism with inner = [⊗ inner].
WiringDiagram as_single_box(const WiringDiagram& d);

/// Splices child's inner boxes in place of parent.inner[slot]. Requires
/// child.outer to match that slot's interface. Equals composing the parent
/// (as a one-box morphism) with child tensored between identities.
WiringDiagram substitute(const WiringDiagram& parent, std::size_t slot,
                         const WiringDiagram& child);

/// The 0/1 selection matrices of an all-linear wiring, with coordinates
/// flattened in declared port order (inner boxes in list order):
///   inner inputs  = Af · inner outputs + Bf · outer inputs
///   outer outputs = Cf · inner outputs
struct SelectionMatrices {
  Eigen::MatrixXd Af;
  Eigen::MatrixXd Bf;
  Eigen::MatrixXd Cf;
};

SelectionMatrices wiring_to_matrices(const WiringDiagram& d);

/// Flattened port-dimension bookkeeping for all-linear diagrams.
int total_dim(const std::vector<PortType>& ports);
int inner_input_dim(const WiringDiagram& d);
int inner_output_dim(const WiringDiagram& d);

/// Value-level view of the assignment maps over finite-set wires. Values are
/// label indices, one per port, inner boxes concatenated in list order.
/// Realizes f_in : X_out × Y_in → X_in and f_out : X_out → Y_out.
std::vector<std::size_t> eval_inputs(const WiringDiagram& d,
                                     const std::vector<std::size_t>& inner_outputs,
                                     const std::vector<std::size_t>& outer_inputs);
std::vector<std::size_t> eval_outputs(const WiringDiagram& d,
                                      const std::vector<std::size_t>& inner_outputs);

}  // namespace wiredsys::wd
