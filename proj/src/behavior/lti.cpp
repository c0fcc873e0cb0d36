#include "wiredsys/behavior/lti.hpp"

#include <algorithm>

#include "wiredsys/error.hpp"

namespace wiredsys::behavior {

namespace {

bool all_linear(const wd::Interface& iface) {
  auto lin = [](const wd::PortType& t) { return wd::is_linear(t); };
  return std::all_of(iface.inputs.begin(), iface.inputs.end(), lin) &&
         std::all_of(iface.outputs.begin(), iface.outputs.end(), lin);
}

}  // namespace

std::vector<std::string> validate_system(const LTISystem& s) {
  std::vector<std::string> issues;
  if (!all_linear(s.iface)) {
    issues.push_back("system ports must all be linear-space typed");
    return issues;
  }
  const Eigen::Index n = s.A.rows();
  const Eigen::Index k = wd::total_dim(s.iface.inputs);
  const Eigen::Index l = wd::total_dim(s.iface.outputs);
  if (s.A.cols() != n) issues.push_back("A must be square");
  if (s.B.rows() != n || s.B.cols() != k) {
    issues.push_back("B must be " + std::to_string(n) + "x" + std::to_string(k));
  }
  if (s.C.rows() != l || s.C.cols() != n) {
    issues.push_back("C must be " + std::to_string(l) + "x" + std::to_string(n));
  }
  return issues;
}

bool system_equal(const LTISystem& a, const LTISystem& b, double tol) {
  auto close = [tol](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    return x.size() == 0 || (x - y).cwiseAbs().maxCoeff() <= tol;
  };
  return wd::same_ports(a.iface, b.iface) && close(a.A, b.A) && close(a.B, b.B) &&
         close(a.C, b.C);
}

LTISystem lti_tensor(const LTISystem& l1, const LTISystem& l2) {
  const Eigen::Index n1 = l1.state_dim(), n2 = l2.state_dim();
  const Eigen::Index k1 = l1.B.cols(), k2 = l2.B.cols();
  const Eigen::Index o1 = l1.C.rows(), o2 = l2.C.rows();

  LTISystem r;
  r.iface = wd::tensor_interface(l1.iface, l2.iface);
  r.A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  r.A.topLeftCorner(n1, n1) = l1.A;
  r.A.bottomRightCorner(n2, n2) = l2.A;
  r.B = Eigen::MatrixXd::Zero(n1 + n2, k1 + k2);
  r.B.topLeftCorner(n1, k1) = l1.B;
  r.B.bottomRightCorner(n2, k2) = l2.B;
  r.C = Eigen::MatrixXd::Zero(o1 + o2, n1 + n2);
  r.C.topLeftCorner(o1, n1) = l1.C;
  r.C.bottomRightCorner(o2, n2) = l2.C;
  return r;
}

LTISystem lti_apply(const wd::WiringDiagram& d, const std::vector<LTISystem>& systems) {
  if (systems.size() != d.inner.size()) {
    throw Error("lti_apply: expected one system per inner box");
  }
  for (std::size_t b = 0; b < systems.size(); ++b) {
    if (!wd::same_ports(systems[b].iface, d.inner[b])) {
      throw Error("lti_apply: system '" + systems[b].iface.name +
                  "' does not inhabit inner box " + std::to_string(b) + " (" +
                  d.inner[b].name + ")");
    }
    if (!all_linear(systems[b].iface)) {
      throw Error("lti_apply: all ports must be linear-space typed");
    }
  }
  if (!validate_diagram(d).empty()) throw Error("lti_apply: invalid wiring diagram");

  LTISystem merged;
  if (systems.empty()) {
    merged.iface = {"", {}, {}};
    merged.A.resize(0, 0);
    merged.B.resize(0, 0);
    merged.C.resize(0, 0);
  } else {
    merged = systems[0];
    for (std::size_t b = 1; b < systems.size(); ++b) {
      merged = lti_tensor(merged, systems[b]);
    }
  }

  const wd::SelectionMatrices m = wiring_to_matrices(d);
  LTISystem r;
  r.iface = d.outer;
  r.A = merged.A + merged.B * m.Af * merged.C;
  r.B = merged.B * m.Bf;
  r.C = m.Cf * merged.C;
  return r;
}

LTISystem embed_linear(const wd::Interface& iface, const Eigen::MatrixXd& H) {
  const Eigen::Index k = wd::total_dim(iface.inputs);
  const Eigen::Index l = wd::total_dim(iface.outputs);
  if (H.rows() != l || H.cols() != k) {
    throw Error("embed_linear: map must be " + std::to_string(l) + "x" +
                std::to_string(k));
  }
  LTISystem r;
  r.iface = iface;
  r.A = Eigen::MatrixXd::Zero(k, k);
  r.B = Eigen::MatrixXd::Identity(k, k);
  r.C = H;
  return r;
}

Eigen::VectorXd LinearEvaluator::update(const Eigen::VectorXd& s,
                                        const Eigen::VectorXd& x) const {
  if (s.size() != A.rows() || x.size() != B.cols()) {
    throw Error("linear evaluator: dimension mismatch");
  }
  return A * s + B * x;
}

Eigen::VectorXd LinearEvaluator::readout(const Eigen::VectorXd& s) const {
  if (s.size() != C.cols()) throw Error("linear evaluator: dimension mismatch");
  return C * s;
}

LinearEvaluator lti_to_moore(const LTISystem& l) { return {l.A, l.B, l.C}; }

}  // namespace wiredsys::behavior
