#include "wiredsys/behavior/trajectory.hpp"

#include "wiredsys/error.hpp"

namespace wiredsys::behavior {

FiniteTrajectory simulate(const MooreMachine& m, std::size_t s0,
                          const std::vector<wd::Tuple>& inputs) {
  if (s0 >= m.state_count()) throw Error("simulate: initial state out of range");

  FiniteTrajectory tr;
  tr.inputs = inputs;
  tr.states.push_back(s0);
  tr.outputs.push_back(m.readout[s0]);
  std::size_t s = s0;
  for (const wd::Tuple& x : inputs) {
    const std::size_t xi = wd::tuple_to_index(m.iface.inputs, x);
    s = m.update[s][xi];
    tr.states.push_back(s);
    tr.outputs.push_back(m.readout[s]);
  }
  return tr;
}

LinearTrajectory simulate(const LTISystem& l, const Eigen::VectorXd& s0,
                          const std::vector<Eigen::VectorXd>& inputs) {
  if (s0.size() != l.state_dim()) throw Error("simulate: initial state has wrong dimension");

  LinearTrajectory tr;
  tr.inputs = inputs;
  tr.states.push_back(s0);
  tr.outputs.push_back(l.C * s0);
  Eigen::VectorXd s = s0;
  for (const Eigen::VectorXd& x : inputs) {
    if (x.size() != l.B.cols()) throw Error("simulate: input has wrong dimension");
    s = l.A * s + l.B * x;
    tr.states.push_back(s);
    tr.outputs.push_back(l.C * s);
  }
  return tr;
}

}  // namespace wiredsys::behavior
