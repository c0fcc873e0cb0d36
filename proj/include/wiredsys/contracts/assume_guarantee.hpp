#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "wiredsys/wd/carrier.hpp"

namespace wiredsys::contracts {

/// One named wire variable with a finite value carrier.
struct AGVariable {
  std::string name;
  std::vector<std::string> carrier;
};

/// An assume-guarantee contract: explicit satisfying sets over the joint
/// carrier of its variables. Tuples hold one carrier index per variable, in
/// declaration order.
struct AGContract {
  std::vector<AGVariable> vars;
  std::set<wd::Tuple> assumption;
  std::set<wd::Tuple> guarantee;
};

/// All tuples of the joint carrier, first variable most significant.
std::vector<wd::Tuple> ag_carrier(const std::vector<AGVariable>& vars);

/// The variables an explicit set actually depends on: variable i is in the
/// support when changing only coordinate i can flip membership.
std::vector<std::size_t> ag_support(const std::vector<AGVariable>& vars,
                                    const std::set<wd::Tuple>& set);

struct AGCompositionResult {
  AGContract contract;
  bool compatible = false;
};

/// Composes two contracts by variable-name matching: equal names denote the
/// same wire (rename2 renames c2's variables first). The composite guarantee
/// is the conjunction. The composite assumption is the weakest predicate over
/// the assumption-relevant variables (the union of both supports) such that,
/// for every valuation of the remaining variables,
///   A ∧ G2 ⇒ A1  and  A ∧ G1 ⇒ A2.
/// The result is stored as the corresponding cylinder over the joint carrier;
/// compatible is false exactly when that maximum is empty.
AGCompositionResult ag_compose(const AGContract& c1, const AGContract& c2,
                               const std::map<std::string, std::string>& rename2 = {});

/// Equality up to variable reordering (matched by name).
bool ag_equal(const AGContract& a, const AGContract& b);

}  // namespace wiredsys::contracts
