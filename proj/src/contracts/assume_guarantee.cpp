#include "wiredsys/contracts/assume_guarantee.hpp"

#include <algorithm>

#include "wiredsys/error.hpp"

namespace wiredsys::contracts {

namespace {

std::size_t joint_size(const std::vector<AGVariable>& vars) {
  std::size_t n = 1;
  for (const AGVariable& v : vars) n *= v.carrier.size();
  return n;
}

wd::Tuple decode(const std::vector<AGVariable>& vars, std::size_t index) {
  wd::Tuple t(vars.size(), 0);
  for (std::size_t i = vars.size(); i-- > 0;) {
    t[i] = index % vars[i].carrier.size();
    index /= vars[i].carrier.size();
  }
  return t;
}

}  // namespace

std::vector<wd::Tuple> ag_carrier(const std::vector<AGVariable>& vars) {
  const std::size_t n = joint_size(vars);
  std::vector<wd::Tuple> all;
  all.reserve(n);
  for (std::size_t i = 0; i < n; ++i) all.push_back(decode(vars, i));
  return all;
}

std::vector<std::size_t> ag_support(const std::vector<AGVariable>& vars,
                                    const std::set<wd::Tuple>& set) {
  std::vector<std::size_t> support;
  const auto carrier = ag_carrier(vars);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    bool depends = false;
    for (const wd::Tuple& t : carrier) {
      const bool base = set.count(t) > 0;
      wd::Tuple alt = t;
      for (std::size_t a = 0; a < vars[i].carrier.size() && !depends; ++a) {
        alt[i] = a;
        depends = (set.count(alt) > 0) != base;
      }
      if (depends) break;
    }
    if (depends) support.push_back(i);
  }
  return support;
}

AGCompositionResult ag_compose(const AGContract& c1, const AGContract& c2,
                               const std::map<std::string, std::string>& rename2) {
  // Apply the binding to c2's variable names.
  std::vector<AGVariable> vars2 = c2.vars;
  for (const auto& [from, to] : rename2) {
    bool found = false;
    for (AGVariable& v : vars2) {
      if (v.name == from) {
        v.name = to;
        found = true;
      }
    }
    if (!found) throw Error("ag_compose: binding references unknown variable '" + from + "'");
  }
  for (std::size_t i = 0; i < vars2.size(); ++i) {
    for (std::size_t j = i + 1; j < vars2.size(); ++j) {
      if (vars2[i].name == vars2[j].name) {
        throw Error("ag_compose: binding makes variable '" + vars2[i].name +
                    "' ambiguous");
      }
    }
  }

  // Combined variable list: c1's variables, then c2's unshared ones. Shared
  // names must agree on their carriers.
  std::vector<AGVariable> vars = c1.vars;
  std::vector<std::size_t> pos1(c1.vars.size()), pos2(vars2.size());
  for (std::size_t i = 0; i < c1.vars.size(); ++i) pos1[i] = i;
  for (std::size_t j = 0; j < vars2.size(); ++j) {
    bool shared = false;
    for (std::size_t i = 0; i < c1.vars.size(); ++i) {
      if (c1.vars[i].name == vars2[j].name) {
        if (c1.vars[i].carrier != vars2[j].carrier) {
          throw Error("ag_compose: shared variable '" + vars2[j].name +
                      "' has mismatched carriers");
        }
        pos2[j] = i;
        shared = true;
        break;
      }
    }
    if (!shared) {
      pos2[j] = vars.size();
      vars.push_back(vars2[j]);
    }
  }

  auto project = [](const wd::Tuple& t, const std::vector<std::size_t>& pos) {
    wd::Tuple p(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) p[i] = t[pos[i]];
    return p;
  };

  const auto carrier = ag_carrier(vars);

  AGContract out;
  out.vars = vars;
  for (const wd::Tuple& v : carrier) {
    if (c1.guarantee.count(project(v, pos1)) && c2.guarantee.count(project(v, pos2))) {
      out.guarantee.insert(v);
    }
  }

  // Assumption-relevant variables: the union of both assumption supports,
  // mapped into the combined index space.
  std::set<std::size_t> relevant;
  for (std::size_t i : ag_support(c1.vars, c1.assumption)) relevant.insert(pos1[i]);
  for (std::size_t j : ag_support(vars2, c2.assumption)) relevant.insert(pos2[j]);
  const std::vector<std::size_t> rel(relevant.begin(), relevant.end());

  // One pass over the joint carrier: a cylinder cell is admitted unless some
  // extension violates one of the two implications.
  std::map<wd::Tuple, bool> admitted;
  for (const wd::Tuple& v : carrier) {
    const bool in_g1 = c1.guarantee.count(project(v, pos1)) > 0;
    const bool in_g2 = c2.guarantee.count(project(v, pos2)) > 0;
    const bool in_a1 = c1.assumption.count(project(v, pos1)) > 0;
    const bool in_a2 = c2.assumption.count(project(v, pos2)) > 0;
    const bool ok = (!in_g2 || in_a1) && (!in_g1 || in_a2);
    auto [it, inserted] = admitted.try_emplace(project(v, rel), ok);
    if (!inserted) it->second = it->second && ok;
  }
  for (const wd::Tuple& v : carrier) {
    if (admitted.at(project(v, rel))) out.assumption.insert(v);
  }

  const bool compatible = !out.assumption.empty();
  return {std::move(out), compatible};
}

bool ag_equal(const AGContract& a, const AGContract& b) {
  if (a.vars.size() != b.vars.size()) return false;
  // Position of each of a's variables inside b.
  std::vector<std::size_t> pos(a.vars.size());
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < b.vars.size(); ++j) {
      if (a.vars[i].name == b.vars[j].name) {
        if (a.vars[i].carrier != b.vars[j].carrier) return false;
        pos[i] = j;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  auto realign = [&pos](const std::set<wd::Tuple>& set) {
    std::set<wd::Tuple> out;
    for (const wd::Tuple& t : set) {
      wd::Tuple r(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[pos[i]];
      out.insert(r);
    }
    return out;
  };
  return realign(b.assumption) == a.assumption && realign(b.guarantee) == a.guarantee;
}

}  // namespace wiredsys::contracts
