#pragma once

#include <Eigen/Dense>

#include "wiredsys/behavior/lti.hpp"
#include "wiredsys/behavior/moore.hpp"

namespace wiredsys::behavior {

/// A simulated run: T inputs produce T+1 states and T+1 outputs, with
/// outputs[t] the readout of states[t].
struct FiniteTrajectory {
  std::vector<wd::Tuple> inputs;
  std::vector<std::size_t> states;
  std::vector<wd::Tuple> outputs;
};

struct LinearTrajectory {
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> outputs;
};

FiniteTrajectory simulate(const MooreMachine& m, std::size_t s0,
                          const std::vector<wd::Tuple>& inputs);

LinearTrajectory simulate(const LTISystem& l, const Eigen::VectorXd& s0,
                          const std::vector<Eigen::VectorXd>& inputs);

}  // namespace wiredsys::behavior
