#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "wiredsys/contracts/static_contract.hpp"
#include "wiredsys/error.hpp"
#include "wiredsys/temporal/time_contract.hpp"

using namespace wiredsys;
using contracts::IndependentContract;
using contracts::IntervalSet;
using contracts::PortSubset;
using contracts::StaticContract;
using fixtures::boolean;
using fixtures::real1;
using temporal::FinGraph;
using temporal::Section;

namespace {

FinGraph kbool() { return temporal::complete_graph(boolean()); }

Section bool_section(const std::vector<std::size_t>& values) {
  return temporal::section_of_values(kbool(), values);
}

// The running example: two trues in a row oblige a false within five ticks.
temporal::TimeContract within5() {
  return temporal::implies_contract(kbool(), kbool(), {1, 1}, 0, 5, 16);
}

// The same membership written directly from the set-builder form.
bool within5_formula(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const std::size_t n = a.size() - 1;
  for (std::size_t i = 0; i + 6 <= n; ++i) {
    if (a[i] == 1 && a[i + 1] == 1) {
      bool found = false;
      for (std::size_t j = i + 2; j <= i + 6; ++j) found = found || b[j] == 0;
      if (!found) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::size_t>> all_words(std::size_t alphabet, std::size_t len) {
  std::vector<std::vector<std::size_t>> words{{}};
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& w : words) {
      for (std::size_t v = 0; v < alphabet; ++v) {
        auto e = w;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    }
    words = std::move(next);
  }
  return words;
}

}  // namespace

TEST_CASE("complete_graph: singleton carrier has one path per length") {
  const auto k = temporal::complete_graph(std::vector<std::string>{"*"});
  CHECK(k.vertices.size() == 1);
  CHECK(k.edges.size() == 1);
  for (std::size_t n = 0; n <= 5; ++n) {
    CHECK(temporal::enumerate_sections(k, n).size() == 1);
  }
}

TEST_CASE("complete_graph: paths of K(A) are tuples of length n+1") {
  for (std::size_t size = 1; size <= 3; ++size) {
    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < size; ++i) carrier.push_back("v" + std::to_string(i));
    const auto k = temporal::complete_graph(carrier);
    CHECK(k.edges.size() == size * size);
    CHECK(temporal::validate_graph(k).empty());
    for (std::size_t n = 0; n <= 4; ++n) {
      std::size_t expect = 1;
      for (std::size_t i = 0; i <= n; ++i) expect *= size;
      CHECK(temporal::enumerate_sections(k, n).size() == expect);
    }
  }
}

TEST_CASE("sections: construction validates against the graph") {
  const auto s = bool_section({1, 1, 0, 1});
  CHECK(s.length() == 3);
  CHECK(temporal::validate_section(s).empty());

  auto broken = s;
  broken.vertex_seq[1] = 0;  // edge no longer joins its endpoints
  CHECK_FALSE(temporal::validate_section(broken).empty());
}

TEST_CASE("restrict_section: full window is the identity") {
  const auto s = bool_section({1, 0, 0, 1, 1});
  CHECK(temporal::section_equal(temporal::restrict_section(s, 0, s.length()), s));
}

TEST_CASE("restrict_section: slicing a three-step path to its tail") {
  // Path f.g.h over a three-vertex chain; the window [1, 3] is g.h.
  FinGraph chain;
  chain.vertices = {"a", "b", "c", "d"};
  chain.edges = {{"f", 0, 1}, {"g", 1, 2}, {"h", 2, 3}};
  Section s{chain, {0, 1, 2, 3}, {0, 1, 2}};
  REQUIRE(temporal::validate_section(s).empty());

  const auto tail = temporal::restrict_section(s, 1, 2);
  CHECK(tail.vertex_seq == std::vector<std::size_t>{1, 2, 3});
  CHECK(tail.edge_seq == std::vector<std::size_t>{1, 2});

  CHECK_THROWS_AS(temporal::restrict_section(s, 2, 2), Error);
}

TEST_CASE("restrict_section: restriction composes additively") {
  for (const auto& word : all_words(2, 5)) {
    const auto s = bool_section({word[0], word[1], word[2], word[3], word[4]});
    const std::size_t n = s.length();
    for (std::size_t p = 0; p <= n; ++p) {
      for (std::size_t m = 0; p + m <= n; ++m) {
        const auto once = temporal::restrict_section(s, p, m);
        for (std::size_t q = 0; q <= m; ++q) {
          for (std::size_t r = 0; q + r <= m; ++r) {
            CHECK(temporal::section_equal(temporal::restrict_section(once, q, r),
                                          temporal::restrict_section(s, p + q, r)));
          }
        }
      }
    }
  }
}

TEST_CASE("glue_sections: zero-length section is neutral") {
  const auto s = bool_section({1, 0, 1});
  const auto unit = bool_section({1});
  CHECK(temporal::section_equal(temporal::glue_sections(unit, s), s));
  const auto end = bool_section({1});
  CHECK(temporal::section_equal(temporal::glue_sections(s, end), s));
}

TEST_CASE("glue_sections: concatenation length and round trip") {
  const auto x = bool_section({0, 1, 1});
  const auto y = bool_section({1, 0, 0, 1});
  const auto xy = temporal::glue_sections(x, y);
  CHECK(xy.length() == 5);
  CHECK(temporal::section_equal(temporal::restrict_section(xy, 0, x.length()), x));
  CHECK(temporal::section_equal(temporal::restrict_section(xy, x.length(), y.length()), y));

  CHECK_THROWS_AS(temporal::glue_sections(x, bool_section({0, 0})), Error);
}

TEST_CASE("lift_static: full and empty contracts lift to constant predicates") {
  const wd::Interface iface{"X", {boolean()}, {boolean()}};
  const auto full = temporal::lift_static(StaticContract::full_independent(iface));
  const auto none = temporal::lift_static(StaticContract::empty(iface));

  for (std::size_t n = 0; n <= 3; ++n) {
    for (const auto& a : all_words(2, n + 1)) {
      for (const auto& b : all_words(2, n + 1)) {
        const auto x = temporal::section_of_values(full.in_graph, a);
        const auto y = temporal::section_of_values(full.out_graph, b);
        CHECK(temporal::time_membership(full, x, y));
        CHECK(!temporal::time_membership(none, x, y));
      }
    }
  }
}

TEST_CASE("lift_static: membership at length zero is plain membership") {
  const wd::Interface iface{"X", {boolean()}, {boolean()}};
  contracts::FiniteRelation r;
  r.iface = iface;
  r.pairs = {{{0}, {1}}, {{1}, {1}}};
  const auto lifted = temporal::lift_static(StaticContract{r});

  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const auto x = temporal::section_of_values(lifted.in_graph, {a});
      const auto y = temporal::section_of_values(lifted.out_graph, {b});
      CHECK(temporal::time_membership(lifted, x, y) ==
            (r.pairs.count({{a}, {b}}) > 0));
    }
  }
}

TEST_CASE("lift_static_sampled: the worked range section is accepted") {
  const wd::Interface iface{"X", {real1()}, {real1()}};
  IndependentContract c{iface,
                        {PortSubset::of_intervals({IntervalSet::closed(2, 3)})},
                        {PortSubset::of_intervals({IntervalSet::closed(10, 11)})}};

  std::vector<Eigen::VectorXd> in_samples, out_samples;
  for (double v : {2.0, 2.5, 2.7, 3.0, 5.0}) {
    in_samples.push_back(Eigen::VectorXd::Constant(1, v));
  }
  for (double v : {9.5, 10.0, 11.0}) {
    out_samples.push_back(Eigen::VectorXd::Constant(1, v));
  }
  const auto lifted = temporal::lift_static_sampled(StaticContract{c}, in_samples, out_samples);

  // (2, 2.5, 2.7, 3 ; 10, 11, 11, 11) as a 3-path pair.
  const auto x = temporal::section_of_values(lifted.in_graph, {0, 1, 2, 3});
  const auto y = temporal::section_of_values(lifted.out_graph, {1, 2, 2, 2});
  CHECK(temporal::time_membership(lifted, x, y));

  // Any instantaneous excursion is rejected.
  const auto y_bad = temporal::section_of_values(lifted.out_graph, {1, 2, 0, 2});
  CHECK(!temporal::time_membership(lifted, x, y_bad));
  const auto x_bad = temporal::section_of_values(lifted.in_graph, {0, 1, 4, 3});
  CHECK(!temporal::time_membership(lifted, x_bad, y));
}

TEST_CASE("time_membership: the two-trues-in-a-row contract") {
  const auto c = within5();
  const auto input = bool_section({1, 1, 0, 0, 0, 0, 0, 0});

  auto answered = bool_section({1, 1, 1, 0, 1, 1, 1, 1});
  CHECK(temporal::time_membership(c, input, answered));

  auto silent = bool_section({1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(!temporal::time_membership(c, input, silent));

  CHECK_THROWS_AS(temporal::time_membership(c, input, bool_section({1, 1})), Error);
}

TEST_CASE("time_membership: matches the set-builder formula up to length 7") {
  const auto c = within5();
  std::size_t members = 0, total = 0;
  for (std::size_t n = 0; n <= 7; ++n) {
    for (const auto& a : all_words(2, n + 1)) {
      for (const auto& b : all_words(2, n + 1)) {
        const bool got = temporal::time_membership(c, bool_section(a), bool_section(b));
        const bool expect = within5_formula(a, b);
        if (got != expect) {
          CAPTURE(n);
          REQUIRE(got == expect);
        }
        members += got;
        ++total;
      }
    }
  }
  CHECK(total == 87380);
  CHECK(members > 0);
  CHECK(members < total);
}

TEST_CASE("time_membership: unsatisfied assumptions do not trigger obligations") {
  const auto c = temporal::window_contract({0.0, 2.5, 4.0}, {9.0, 10.5, 12.0},
                                           IntervalSet::closed(2, 3),
                                           IntervalSet::closed(10, 11), 1);
  // Inputs never in [2, 3]; outputs arbitrary.
  const auto x = temporal::section_of_values(c.in_graph, {0, 2, 0, 2});
  const auto y = temporal::section_of_values(c.out_graph, {0, 0, 2, 2});
  CHECK(temporal::time_membership(c, x, y));

  // A triggered assumption must be answered one tick later.
  const auto x2 = temporal::section_of_values(c.in_graph, {0, 1, 0, 2});
  const auto y_ok = temporal::section_of_values(c.out_graph, {0, 0, 1, 2});
  const auto y_bad = temporal::section_of_values(c.out_graph, {0, 0, 2, 2});
  CHECK(temporal::time_membership(c, x2, y_ok));
  CHECK(!temporal::time_membership(c, x2, y_bad));

  // An assumption at the final tick has no room for its obligation.
  const auto x3 = temporal::section_of_values(c.in_graph, {0, 0, 0, 1});
  CHECK(temporal::time_membership(c, x3, y_bad));
}

TEST_CASE("check_restriction_closed: lifted static contracts are closed") {
  const wd::Interface iface{"X", {boolean()}, {boolean()}};
  contracts::FiniteRelation r;
  r.iface = iface;
  r.pairs = {{{0}, {0}}, {{1}, {1}}, {{1}, {0}}};
  const auto report =
      temporal::check_restriction_closed(temporal::lift_static(StaticContract{r}), 6);
  CHECK(report.closed);
  CHECK(report.violations.empty());
  CHECK(report.pairs_checked > 0);
}

TEST_CASE("check_restriction_closed: the within-five contract is closed at N=8") {
  const auto report = temporal::check_restriction_closed(within5(), 8);
  CHECK(report.closed);
}

TEST_CASE("check_restriction_closed: exactly-one-false is not closed") {
  temporal::TimeContract c;
  c.name = "exactly-one-false";
  c.in_graph = kbool();
  c.out_graph = kbool();
  c.horizon = 8;
  c.membership = [](const Section&, const Section& y) {
    std::size_t falses = 0;
    for (std::size_t v : y.vertex_seq) falses += v == 0;
    return falses == 1;
  };
  const auto report = temporal::check_restriction_closed(c, 3);
  CHECK(!report.closed);
  REQUIRE(!report.violations.empty());
  // The reported window really is a violation: member whose cut is not.
  const auto& v = report.violations.front();
  CHECK(c.membership(v.input, v.output));
  CHECK(!c.membership(temporal::restrict_section(v.input, v.p, v.m),
                      temporal::restrict_section(v.output, v.p, v.m)));
}
