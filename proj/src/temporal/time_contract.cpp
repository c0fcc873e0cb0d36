#include "wiredsys/temporal/time_contract.hpp"

#include <sstream>

#include "wiredsys/error.hpp"

namespace wiredsys::temporal {

namespace {

std::string fmt_sample(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v(i);
  }
  os << ")";
  return os.str();
}

std::string fmt_tuple(const std::vector<wd::PortType>& ports, const wd::Tuple& t) {
  std::string s = "(";
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (p) s += ",";
    s += std::get<wd::FiniteSet>(ports[p]).labels[t[p]];
  }
  return s + ")";
}

}  // namespace

bool time_membership(const TimeContract& c, const Section& x, const Section& y) {
  if (x.length() != y.length()) {
    throw Error("time_membership: sections must have equal length");
  }
  if (x.length() > c.horizon) {
    throw Error("time_membership: length exceeds the contract horizon");
  }
  return c.membership(x, y);
}

TimeContract lift_static(const contracts::StaticContract& r, std::size_t horizon) {
  const wd::Interface& iface = r.iface();
  const auto in_tuples = wd::enumerate_carrier(iface.inputs);
  const auto out_tuples = wd::enumerate_carrier(iface.outputs);

  std::vector<std::string> in_labels, out_labels;
  for (const auto& t : in_tuples) in_labels.push_back(fmt_tuple(iface.inputs, t));
  for (const auto& t : out_tuples) out_labels.push_back(fmt_tuple(iface.outputs, t));

  TimeContract c;
  c.name = "lift";
  c.in_graph = complete_graph(in_labels);
  c.out_graph = complete_graph(out_labels);
  c.horizon = horizon;
  c.membership = [r, in_tuples, out_tuples](const Section& x, const Section& y) {
    for (std::size_t i = 0; i < x.vertex_seq.size(); ++i) {
      if (!contracts::allows(r, in_tuples[x.vertex_seq[i]], out_tuples[y.vertex_seq[i]])) {
        return false;
      }
    }
    return true;
  };
  return c;
}

TimeContract lift_static_sampled(const contracts::StaticContract& r,
                                 const std::vector<Eigen::VectorXd>& in_samples,
                                 const std::vector<Eigen::VectorXd>& out_samples,
                                 std::size_t horizon, double tol) {
  std::vector<std::string> in_labels, out_labels;
  for (const auto& v : in_samples) in_labels.push_back(fmt_sample(v));
  for (const auto& v : out_samples) out_labels.push_back(fmt_sample(v));

  TimeContract c;
  c.name = "lift-sampled";
  c.in_graph = complete_graph(in_labels);
  c.out_graph = complete_graph(out_labels);
  c.horizon = horizon;
  c.membership = [r, in_samples, out_samples, tol](const Section& x, const Section& y) {
    for (std::size_t i = 0; i < x.vertex_seq.size(); ++i) {
      if (!contracts::allows(r, in_samples[x.vertex_seq[i]], out_samples[y.vertex_seq[i]],
                             tol)) {
        return false;
      }
    }
    return true;
  };
  return c;
}

TimeContract window_contract(const std::vector<double>& in_samples,
                             const std::vector<double>& out_samples,
                             const contracts::IntervalSet& assume,
                             const contracts::IntervalSet& guarantee,
                             std::size_t delay, std::size_t horizon) {
  std::vector<std::string> in_labels, out_labels;
  for (double v : in_samples) in_labels.push_back(fmt_sample(Eigen::VectorXd::Constant(1, v)));
  for (double v : out_samples) out_labels.push_back(fmt_sample(Eigen::VectorXd::Constant(1, v)));

  TimeContract c;
  c.name = "window";
  c.in_graph = complete_graph(in_labels);
  c.out_graph = complete_graph(out_labels);
  c.horizon = horizon;
  c.membership = [in_samples, out_samples, assume, guarantee,
                  delay](const Section& x, const Section& y) {
    const std::size_t n = x.length();
    for (std::size_t i = 0; i <= n; ++i) {
      if (!assume.contains(in_samples[x.vertex_seq[i]])) continue;
      if (i + delay > n) continue;  // obligation falls past the window
      if (!guarantee.contains(out_samples[y.vertex_seq[i + delay]])) return false;
    }
    return true;
  };
  return c;
}

TimeContract implies_contract(const FinGraph& in_graph, const FinGraph& out_graph,
                              const std::vector<std::size_t>& pattern,
                              std::size_t response, std::size_t within,
                              std::size_t horizon) {
  if (pattern.empty()) throw Error("implies_contract: pattern must be nonempty");

  TimeContract c;
  c.name = "implies";
  c.in_graph = in_graph;
  c.out_graph = out_graph;
  c.horizon = horizon;
  c.membership = [pattern, response, within](const Section& x, const Section& y) {
    const std::size_t n = x.length();
    const std::size_t len = pattern.size();
    for (std::size_t i = 0; i + len - 1 + within <= n; ++i) {
      bool matches = true;
      for (std::size_t k = 0; k < len && matches; ++k) {
        matches = x.vertex_seq[i + k] == pattern[k];
      }
      if (!matches) continue;
      bool answered = false;
      for (std::size_t j = i + len; j <= i + len - 1 + within && !answered; ++j) {
        answered = y.vertex_seq[j] == response;
      }
      if (!answered) return false;
    }
    return true;
  };
  return c;
}

TimeContract table_contract(const FinGraph& in_graph, const FinGraph& out_graph,
                            std::vector<std::pair<std::vector<std::size_t>,
                                                  std::vector<std::size_t>>> rows,
                            std::size_t horizon) {
  TimeContract c;
  c.name = "table";
  c.in_graph = in_graph;
  c.out_graph = out_graph;
  c.horizon = horizon;
  c.membership = [rows = std::move(rows)](const Section& x, const Section& y) {
    for (const auto& [in, out] : rows) {
      if (x.vertex_seq == in && y.vertex_seq == out) return true;
    }
    return false;
  };
  return c;
}

RestrictionReport check_restriction_closed(const TimeContract& c, std::size_t N,
                                           std::size_t max_violations) {
  if (N > c.horizon) throw Error("check_restriction_closed: N exceeds the horizon");

  RestrictionReport report;
  for (std::size_t n = 0; n <= N; ++n) {
    const auto ins = enumerate_sections(c.in_graph, n);
    const auto outs = enumerate_sections(c.out_graph, n);
    for (const Section& x : ins) {
      for (const Section& y : outs) {
        if (!c.membership(x, y)) continue;
        ++report.pairs_checked;
        for (std::size_t m = 0; m < n; ++m) {
          for (std::size_t p = 0; p + m <= n; ++p) {
            if (!c.membership(restrict_section(x, p, m), restrict_section(y, p, m))) {
              report.closed = false;
              if (report.violations.size() < max_violations) {
                report.violations.push_back({n, p, m, x, y});
              }
            }
          }
        }
      }
    }
  }
  return report;
}

}  // namespace wiredsys::temporal
