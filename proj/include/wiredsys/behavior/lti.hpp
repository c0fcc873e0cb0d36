#pragma once

#include <Eigen/Dense>

#include "wiredsys/wd/ops.hpp"
#include "wiredsys/wd/types.hpp"

namespace wiredsys::behavior {

/// A linear time-invariant discrete system inhabiting a box with linear
/// ports: update s' = A·s + B·x, readout y = C·s.
struct LTISystem {
  wd::Interface iface;
  Eigen::MatrixXd A;  // n×n
  Eigen::MatrixXd B;  // n×k, k = total input dimension
  Eigen::MatrixXd C;  // l×n, l = total output dimension

  Eigen::Index state_dim() const { return A.rows(); }
};

std::vector<std::string> validate_system(const LTISystem& s);

bool system_equal(const LTISystem& a, const LTISystem& b, double tol = 1e-12);

/// Parallel composite: block-diagonal A, B, C; state dimension n1+n2.
LTISystem lti_tensor(const LTISystem& l1, const LTISystem& l2);

/// The composite system over an all-linear wiring: tensor the components,
/// then rewire with the diagram's selection matrices:
///   (A + B·Af·C, B·Bf, Cf·C).
LTISystem lti_apply(const wd::WiringDiagram& d,
                    const std::vector<LTISystem>& systems);

/// A linear map H (l×k) as a memoryless system: A = 0, B = I, C = H.
LTISystem embed_linear(const wd::Interface& iface, const Eigen::MatrixXd& H);

/// Point evaluator for a linear system, for cross-checking the closed-form
/// composite against the general update/readout formulas.
struct LinearEvaluator {
  Eigen::MatrixXd A, B, C;
  Eigen::VectorXd update(const Eigen::VectorXd& s, const Eigen::VectorXd& x) const;
  Eigen::VectorXd readout(const Eigen::VectorXd& s) const;
};

LinearEvaluator lti_to_moore(const LTISystem& l);

}  // namespace wiredsys::behavior
