// Acceptance suite: every criterion runs at its stated tolerance and prints
// one PASS line when it holds. Failures abort the criterion's test case.

#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wiredsys/contracts/assume_guarantee.hpp"
#include "wiredsys/contracts/static_contract.hpp"
#include "wiredsys/dsl/model.hpp"
#include "wiredsys/security/attack.hpp"
#include "wiredsys/security/testing.hpp"
#include "wiredsys/temporal/time_contract.hpp"
#include "wiredsys/util/numfmt.hpp"

using namespace wiredsys;
using behavior::MooreMachine;
using contracts::AGContract;
using contracts::FiniteRelation;
using contracts::IndependentContract;
using contracts::IntervalSet;
using contracts::PortSubset;
using contracts::StaticContract;
using fixtures::boolean;
using fixtures::real1;

namespace {

void pass(int criterion, const std::string& what) {
  std::printf("[criterion %2d] PASS  %s\n", criterion, what.c_str());
  std::fflush(stdout);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path models_dir() { return WIREDSYS_MODELS_DIR; }

dsl::Model load_model(const std::string& name) {
  const auto result = dsl::parse_model(read_file(models_dir() / name));
  REQUIRE(result.ok());
  for (const auto& d : dsl::typecheck_model(result.model)) {
    REQUIRE(d.severity != dsl::Diagnostic::Severity::Error);
  }
  return result.model;
}

std::vector<behavior::LTISystem> uav_components() {
  return {fixtures::uav_sensor(), fixtures::uav_controller(), fixtures::uav_dynamics()};
}

// Grid carrier {-1, 0, 1, 2}; index i encodes i - 1.
contracts::AGVariable grid_var(const std::string& name) {
  return {name, {"-1", "0", "1", "2"}};
}
double grid_value(std::size_t index) { return static_cast<double>(index) - 1.0; }
double grid_div(double x, double y) {
  return std::min(2.0, std::max(-1.0, std::round(x / y)));
}

}  // namespace

TEST_CASE("criterion 1: composite airframe dynamics match the explicit equations") {
  const auto composite = behavior::lti_apply(fixtures::uav_wiring(), uav_components());
  REQUIRE(composite.state_dim() == 7);

  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> u(-25.0, 25.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd s(7), x(2);
    for (int j = 0; j < 7; ++j) s(j) = u(rng);
    for (int j = 0; j < 2; ++j) x(j) = u(rng);
    const double e = x(0), d = x(1);

    Eigen::VectorXd expect(7);
    expect << s(6), e,                                        // sensor placeholders
        s(0) + s(1), d,                                       // controller placeholders
        -0.313 * s(4) + 56.7 * s(5) + 0.232 * (s(2) + s(3)),  // angle of attack
        -0.0139 * s(4) - 0.426 * s(5) + 0.0203 * (s(2) + s(3)),  // pitch rate
        56.7 * s(5);                                          // pitch angle
    const Eigen::VectorXd got = composite.A * s + composite.B * x;
    worst = std::max(worst, (got - expect).cwiseAbs().maxCoeff());
  }
  REQUIRE(worst <= 1e-9);
  pass(1, "update agrees with the five-equation system on 100 vectors, max |err| = " +
              util::format_double(worst));
}

TEST_CASE("criterion 2: the composite readout selects exactly the pitch angle") {
  const auto composite = behavior::lti_apply(fixtures::uav_wiring(), uav_components());
  Eigen::MatrixXd expect(1, 7);
  expect << 0, 0, 0, 0, 0, 0, 1;
  REQUIRE(composite.C.rows() == 1);
  REQUIRE(composite.C.cols() == 7);
  REQUIRE((composite.C - expect).cwiseAbs().maxCoeff() == 0.0);
  pass(2, "C = (0 0 0 0 0 0 1) exactly");
}

TEST_CASE("criterion 3: range contracts compose to the published product") {
  const auto d = fixtures::uav_wiring();
  const auto full1 = PortSubset::full_for(real1());
  IndependentContract L{d.inner[0],
                        {full1, PortSubset::of_intervals({IntervalSet::closed(0, 100)})},
                        {full1}};
  IndependentContract C{d.inner[1],
                        {full1, PortSubset::of_intervals({IntervalSet::closed(-20, 20)})},
                        {full1}};
  IndependentContract D{d.inner[2],
                        {full1},
                        {PortSubset::of_intervals({IntervalSet::closed(-35, 35)})}};

  const auto out = contracts::contract_apply_independent(d, {L, C, D});
  REQUIRE(!out.is_empty());
  const auto& c = std::get<IndependentContract>(out.rep);
  REQUIRE(c.inputs[0] == PortSubset::of_intervals({IntervalSet::closed(0, 100)}));
  REQUIRE(c.inputs[1] == PortSubset::of_intervals({IntervalSet::closed(-20, 20)}));
  REQUIRE(c.outputs[0] == PortSubset::of_intervals({IntervalSet::closed(-35, 35)}));

  IndependentContract C2 = C;
  C2.outputs[0] = PortSubset::of_intervals({IntervalSet::closed(5, 6)});
  IndependentContract D2 = D;
  D2.inputs[0] = PortSubset::of_intervals({IntervalSet::closed(8, 9)});
  REQUIRE(contracts::contract_apply_independent(d, {L, C2, D2}).is_empty());
  pass(3, "[0,100] x [-20,20] x [-35,35] exactly; clashing wires give the empty contract");
}

TEST_CASE("criterion 4: assume-guarantee grid example") {
  AGContract divider;
  divider.vars = {grid_var("x"), grid_var("y"), grid_var("z")};
  for (const auto& v : contracts::ag_carrier(divider.vars)) {
    const double x = grid_value(v[0]), y = grid_value(v[1]), z = grid_value(v[2]);
    if (y != 0.0) {
      divider.assumption.insert(v);
      if (z == grid_div(x, y)) divider.guarantee.insert(v);
    }
  }
  AGContract threshold;
  threshold.vars = {grid_var("u"), grid_var("x")};
  for (const auto& v : contracts::ag_carrier(threshold.vars)) {
    threshold.assumption.insert(v);
    if (grid_value(v[1]) > grid_value(v[0])) threshold.guarantee.insert(v);
  }

  const auto r = contracts::ag_compose(divider, threshold);
  REQUIRE(r.compatible);
  for (const auto& v : contracts::ag_carrier(r.contract.vars)) {
    const double x = grid_value(v[0]), y = grid_value(v[1]), z = grid_value(v[2]);
    const double u = grid_value(v[3]);
    const bool in_g = y != 0.0 && x > u && z == grid_div(x, y);
    REQUIRE((r.contract.guarantee.count(v) > 0) == in_g);
    REQUIRE((r.contract.assumption.count(v) > 0) == (y != 0.0));
  }
  REQUIRE(oracles::weakest_assumption_oracle(divider, threshold, r.contract) ==
          r.contract.assumption);
  pass(4, "G = (x>u) and (z=x/y); weakest A = (y != 0) on the 4^4 grid, oracle-exact");
}

TEST_CASE("criterion 5: serial composition is relational composition, exhaustively") {
  std::size_t checked = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back(std::string(1, char('a' + i)));
    const wd::PortType wire = wd::FiniteSet{"w", labels};
    const auto d = fixtures::serial_wiring(wire);

    const std::size_t cells = k * k;
    for (std::size_t mx = 0; mx < (std::size_t{1} << cells); ++mx) {
      FiniteRelation rx;
      rx.iface = d.inner[0];
      for (std::size_t c = 0; c < cells; ++c) {
        if (mx & (std::size_t{1} << c)) rx.pairs.insert({{c / k}, {c % k}});
      }
      for (std::size_t my = 0; my < (std::size_t{1} << cells); ++my) {
        FiniteRelation ry;
        ry.iface = d.inner[1];
        for (std::size_t c = 0; c < cells; ++c) {
          if (my & (std::size_t{1} << c)) ry.pairs.insert({{c / k}, {c % k}});
        }

        const auto joint =
            contracts::contract_tensor(StaticContract{rx}, StaticContract{ry});
        const auto composite =
            contracts::contract_apply_finite(d, contracts::to_finite_relation(joint));

        FiniteRelation expect;
        expect.iface = d.outer;
        for (const auto& [x1, x2] : rx.pairs) {
          for (const auto& [y1, y2] : ry.pairs) {
            if (x2 == y1) expect.pairs.insert({x1, y2});
          }
        }
        REQUIRE(composite.pairs == expect.pairs);
        ++checked;
      }
    }
  }
  pass(5, "all relation pairs over carriers of size <= 3: " + std::to_string(checked) +
              " instances, zero discrepancies");
}

TEST_CASE("criterion 6: pushforward matches brute-force wire enumeration") {
  std::mt19937 rng(2027);
  fixtures::DiagramGenOptions opt;
  opt.type_pool = {wd::FiniteSet{"b", {"0", "1"}},
                   wd::FiniteSet{"q", {"a", "b", "c", "d"}}};
  std::size_t checked = 0;
  for (int i = 0; checked < 500 && i < 3000; ++i) {
    const auto d = fixtures::random_diagram(rng, opt);
    std::vector<wd::PortType> out_ports;
    for (const auto& box : d.inner) {
      out_ports.insert(out_ports.end(), box.outputs.begin(), box.outputs.end());
    }
    if (wd::carrier_size(out_ports) * wd::carrier_size(d.outer.inputs) > 4096) continue;

    std::vector<FiniteRelation> rs;
    for (const auto& box : d.inner) rs.push_back(oracles::random_relation(rng, box));
    StaticContract joint{rs[0]};
    for (std::size_t b = 1; b < rs.size(); ++b) {
      joint = contracts::contract_tensor(joint, StaticContract{rs[b]});
    }
    const auto composite =
        contracts::contract_apply_finite(d, contracts::to_finite_relation(joint));
    REQUIRE(composite.pairs == oracles::brute_force_composite(d, rs).pairs);
    ++checked;
  }
  REQUIRE(checked >= 500);
  pass(6, std::to_string(checked) + " generated instances, zero discrepancies");
}

TEST_CASE("criterion 7: functor laws and lax monoidality for machines") {
  std::mt19937 rng(2028);
  fixtures::DiagramGenOptions opt;
  std::size_t law_checked = 0;
  for (int i = 0; law_checked < 200 && i < 1500; ++i) {
    const auto f = fixtures::random_diagram(rng, opt);
    const auto g = fixtures::random_enclosure(rng, f.outer, opt);

    std::vector<MooreMachine> machines;
    std::size_t size = wd::carrier_size(f.outer.inputs);
    for (const auto& box : f.inner) {
      machines.push_back(fixtures::random_machine(rng, box, 3));
      size *= machines.back().state_count() *
              std::max<std::size_t>(machines.back().input_count(), 1);
    }
    if (size > 60000) continue;

    const auto applied = behavior::moore_apply(f, machines);
    REQUIRE(behavior::machine_table_equal(
        behavior::moore_apply(wd::identity_diagram(f.outer), {applied}), applied));
    REQUIRE(behavior::machine_table_equal(
        behavior::moore_apply(wd::compose_diagrams(g, f), machines),
        behavior::moore_apply(g, {applied})));
    ++law_checked;
  }
  REQUIRE(law_checked >= 200);

  std::size_t lax_checked = 0;
  fixtures::DiagramGenOptions small = opt;
  small.max_boxes = 2;
  for (int i = 0; lax_checked < 60 && i < 400; ++i) {
    const auto f1 = fixtures::random_diagram(rng, small);
    const auto f2 = fixtures::random_diagram(rng, small);
    std::vector<MooreMachine> m1, m2;
    for (const auto& box : f1.inner) m1.push_back(fixtures::random_machine(rng, box, 2));
    for (const auto& box : f2.inner) m2.push_back(fixtures::random_machine(rng, box, 2));
    std::vector<MooreMachine> all = m1;
    all.insert(all.end(), m2.begin(), m2.end());

    REQUIRE(behavior::machine_table_equal(
        behavior::moore_apply(wd::tensor_diagrams(f1, f2), all),
        behavior::moore_tensor(behavior::moore_apply(f1, m1),
                               behavior::moore_apply(f2, m2))));
    ++lax_checked;
  }
  REQUIRE(lax_checked >= 60);
  pass(7, std::to_string(law_checked) + " functor-law and " + std::to_string(lax_checked) +
              " lax-monoidality instances, exhaustive table equality");
}

TEST_CASE("criterion 8: closed-form linear rewiring agrees with the general formula") {
  std::mt19937 rng(2029);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  fixtures::DiagramGenOptions opt;
  opt.type_pool = {wd::LinSpace{1}, wd::LinSpace{2}};

  double worst = 0.0;
  for (int inst = 0; inst < 30; ++inst) {
    const auto d = fixtures::random_diagram(rng, opt);
    std::vector<behavior::LTISystem> systems;
    for (const auto& box : d.inner) {
      behavior::LTISystem s;
      s.iface = box;
      const int n = 1 + static_cast<int>(rng() % 3);
      s.A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); });
      s.B = Eigen::MatrixXd::NullaryExpr(n, wd::total_dim(box.inputs), [&] { return u(rng); });
      s.C = Eigen::MatrixXd::NullaryExpr(wd::total_dim(box.outputs), n, [&] { return u(rng); });
      systems.push_back(std::move(s));
    }
    const auto composite = behavior::lti_apply(d, systems);
    const auto m = wd::wiring_to_matrices(d);

    behavior::LTISystem merged;
    if (systems.empty()) {
      merged.iface = {"", {}, {}};
      merged.A.resize(0, 0);
      merged.B.resize(0, 0);
      merged.C.resize(0, 0);
    } else {
      merged = systems[0];
      for (std::size_t b = 1; b < systems.size(); ++b) {
        merged = behavior::lti_tensor(merged, systems[b]);
      }
    }
    const auto ev = behavior::lti_to_moore(merged);

    for (int pt = 0; pt < 100; ++pt) {
      Eigen::VectorXd s = Eigen::VectorXd::NullaryExpr(merged.state_dim(), [&] { return u(rng); });
      Eigen::VectorXd y = Eigen::VectorXd::NullaryExpr(m.Bf.cols(), [&] { return u(rng); });
      const Eigen::VectorXd next_general = ev.update(s, m.Af * ev.readout(s) + m.Bf * y);
      const Eigen::VectorXd next_closed = composite.A * s + composite.B * y;
      worst = std::max(worst, (next_general - next_closed).cwiseAbs().maxCoeff());
      const Eigen::VectorXd out_general = m.Cf * ev.readout(s);
      const Eigen::VectorXd out_closed = composite.C * s;
      if (out_general.size() > 0) {
        worst = std::max(worst, (out_general - out_closed).cwiseAbs().maxCoeff());
      }
    }
  }
  REQUIRE(worst <= 1e-9);
  pass(8, "30 instances x 100 points, max |err| = " + util::format_double(worst));
}

TEST_CASE("criterion 9: discrete-time semantics") {
  // The worked range section is accepted by the sampled lift.
  const wd::Interface iface{"X", {real1()}, {real1()}};
  IndependentContract band{iface,
                           {PortSubset::of_intervals({IntervalSet::closed(2, 3)})},
                           {PortSubset::of_intervals({IntervalSet::closed(10, 11)})}};
  std::vector<Eigen::VectorXd> in_samples, out_samples;
  for (double v : {2.0, 2.5, 2.7, 3.0}) in_samples.push_back(Eigen::VectorXd::Constant(1, v));
  for (double v : {10.0, 11.0}) out_samples.push_back(Eigen::VectorXd::Constant(1, v));
  const auto lifted =
      temporal::lift_static_sampled(StaticContract{band}, in_samples, out_samples);
  REQUIRE(temporal::time_membership(
      lifted, temporal::section_of_values(lifted.in_graph, {0, 1, 2, 3}),
      temporal::section_of_values(lifted.out_graph, {0, 1, 1, 1})));

  // The two-trues-in-a-row contract matches the set-builder formula.
  const auto kb = temporal::complete_graph(boolean());
  const auto within5 = temporal::implies_contract(kb, kb, {1, 1}, 0, 5, 16);
  auto formula = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    const std::size_t n = a.size() - 1;
    for (std::size_t i = 0; i + 6 <= n; ++i) {
      if (a[i] == 1 && a[i + 1] == 1) {
        bool found = false;
        for (std::size_t j = i + 2; j <= i + 6; ++j) found = found || b[j] == 0;
        if (!found) return false;
      }
    }
    return true;
  };
  std::size_t pairs = 0;
  for (std::size_t n = 0; n <= 7; ++n) {
    std::vector<std::size_t> a(n + 1, 0), b(n + 1, 0);
    const std::size_t words = std::size_t{1} << (n + 1);
    for (std::size_t wa = 0; wa < words; ++wa) {
      for (std::size_t i = 0; i <= n; ++i) a[i] = (wa >> i) & 1u;
      for (std::size_t wb = 0; wb < words; ++wb) {
        for (std::size_t i = 0; i <= n; ++i) b[i] = (wb >> i) & 1u;
        REQUIRE(temporal::time_membership(within5,
                                          temporal::section_of_values(kb, a),
                                          temporal::section_of_values(kb, b)) ==
                formula(a, b));
        ++pairs;
      }
    }
  }

  // Lifted static contracts are restriction-closed up to N = 6.
  FiniteRelation copy;
  copy.iface = {"B", {boolean()}, {boolean()}};
  copy.pairs = {{{0}, {0}}, {{1}, {1}}};
  const auto closure =
      temporal::check_restriction_closed(temporal::lift_static(StaticContract{copy}), 6);
  REQUIRE(closure.closed);
  const auto sampled_closure = temporal::check_restriction_closed(lifted, 4);
  REQUIRE(sampled_closure.closed);
  pass(9, "range section accepted; within-5 matches the formula on " +
              std::to_string(pairs) + " pairs; lifted contracts closed to N=6");
}

TEST_CASE("criterion 10: the attacker scenario end to end") {
  const auto model = load_model("security.model");
  const auto* kb_decl = model.find_kb("sensors");
  REQUIRE(kb_decl != nullptr);

  security::KnowledgeDatabase kb;
  kb.iface = model.find_box(kb_decl->box)->iface;
  for (const auto& entry : kb_decl->entries) {
    kb.entries.push_back({entry, *model.find_behavior(entry)});
  }
  REQUIRE(kb.entries.size() == 5);
  const auto target = std::get<MooreMachine>(*model.find_behavior("Lprobe"));

  // Exactly one knowledge-base entry is behaviorally equivalent to the target.
  std::vector<std::string> equivalent;
  std::size_t bound = 0;
  for (const auto& [name, b] : kb.entries) {
    const auto& m = std::get<MooreMachine>(b);
    bound = std::max(bound, m.state_count() * target.state_count());
    if (security::behavioral_equiv(m, target)) equivalent.push_back(name);
  }
  REQUIRE(equivalent == std::vector<std::string>{"Lecho"});

  // The terminal test keeps all five candidates.
  const std::vector<security::SecurityTest> terminal{security::terminal_test()};
  REQUIRE(security::yoneda_filter(security::run_tests(target, terminal), kb, terminal)
              .size() == 5);

  // The io-table test at the product-state bound returns exactly that entry.
  const std::vector<security::SecurityTest> table{security::iotable_test(bound)};
  REQUIRE(security::yoneda_filter(security::run_tests(target, table), kb, table) ==
          equivalent);

  // The rewire-plus-rewrite attack changes the composite behavior.
  const auto* wiring = model.find_wiring("sensor");
  std::vector<security::Behavior> real_base{*model.find_behavior("Iunit"),
                                            *model.find_behavior("Gunit"),
                                            *model.find_behavior("Punit")};
  security::AttackPlan plan;
  plan.rewrites = {{"G", *model.find_behavior("Ghacked")}};
  plan.rewires.push_back({1, 1, security::ConstFinite{0}});

  const auto on_real = security::apply_attack(wiring->diagram, real_base, plan);
  REQUIRE(!security::behavioral_equiv(std::get<MooreMachine>(on_real.original),
                                      std::get<MooreMachine>(on_real.attacked)));

  // The same plan on a behaviorally equivalent but structurally different
  // model produces an equivalent attacked composite.
  std::vector<security::Behavior> kb_base{*model.find_behavior("Iunit"),
                                          *model.find_behavior("Gunit"),
                                          *model.find_behavior("Psplit")};
  REQUIRE(security::behavioral_equiv(
      std::get<MooreMachine>(security::compose_behaviors(wiring->diagram, real_base)),
      std::get<MooreMachine>(security::compose_behaviors(wiring->diagram, kb_base))));
  const auto on_kb = security::apply_attack(wiring->diagram, kb_base, plan);
  REQUIRE(security::behavioral_equiv(std::get<MooreMachine>(on_real.attacked),
                                     std::get<MooreMachine>(on_kb.attacked)));
  pass(10, "filtering, the cut-and-rewrite attack, and its transfer all behave as stated");
}

TEST_CASE("criterion 11: category laws over random chains") {
  std::mt19937 rng(2030);
  fixtures::DiagramGenOptions opt;
  std::size_t checked = 0;
  for (int i = 0; checked < 200 && i < 800; ++i) {
    const auto f = fixtures::random_diagram(rng, opt);
    const auto g = fixtures::random_enclosure(rng, f.outer, opt);
    const auto h = fixtures::random_enclosure(rng, g.outer, opt);

    REQUIRE(wd::diagram_equal(wd::compose_diagrams(wd::identity_diagram(f.outer), f), f));
    REQUIRE(wd::diagram_equal(
        wd::compose_diagrams(h, wd::compose_diagrams(g, f)),
        wd::compose_diagrams(wd::compose_diagrams(h, g), f)));

    if (!f.inner.empty()) {
      const std::size_t slot =
          std::uniform_int_distribution<std::size_t>(0, f.inner.size() - 1)(rng);
      REQUIRE(wd::diagram_equal(
          wd::substitute(f, slot, wd::identity_diagram(f.inner[slot])), f));

      const auto child = fixtures::random_child(rng, f.inner[slot], opt);
      wd::WiringDiagram chain;
      bool first = true;
      for (std::size_t b = 0; b < f.inner.size(); ++b) {
        const auto piece = b == slot ? child : wd::identity_diagram(f.inner[b]);
        chain = first ? piece : wd::tensor_diagrams(chain, piece);
        first = false;
      }
      REQUIRE(wd::diagram_equal(wd::substitute(f, slot, child),
                                wd::compose_diagrams(wd::as_single_box(f), chain)));
    }
    ++checked;
  }
  REQUIRE(checked >= 200);
  pass(11, std::to_string(checked) + " chains: unitality, associativity, substitution");
}

TEST_CASE("criterion 12: model corpus round trip and CLI exit codes") {
  const std::vector<std::string> fixtures_list = {
      "uav.model",    "security.model", "notgate.model", "serial.model",
      "fig22.model",  "temporal.model", "gains.model"};
  for (const auto& name : fixtures_list) {
    CAPTURE(name);
    const auto first = dsl::parse_model(read_file(models_dir() / name));
    REQUIRE(first.ok());
    const auto second = dsl::parse_model(dsl::render_model(first.model));
    REQUIRE(second.ok());
    REQUIRE(dsl::model_equal(first.model, second.model));
  }

  auto run_check = [](const std::filesystem::path& model) {
    const std::string cmd = std::string("'") + WIREDSYS_CLI_PATH + "' check '" +
                            model.string() + "' > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
  };
  for (const auto& name : fixtures_list) {
    CAPTURE(name);
    REQUIRE(run_check(models_dir() / name) == 0);
  }
  const std::vector<std::string> broken = {
      "bad_direction.model",     "bad_missing_update.model", "bad_unresolved.model",
      "bad_type_mismatch.model", "bad_syntax.model",         "bad_missing_source.model"};
  for (const auto& name : broken) {
    CAPTURE(name);
    REQUIRE(run_check(models_dir() / "broken" / name) == 2);
  }
  pass(12, std::to_string(fixtures_list.size()) + " fixtures round-trip and check clean; " +
               std::to_string(broken.size()) + " broken variants exit 2");
}
