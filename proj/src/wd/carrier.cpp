#include "wiredsys/wd/carrier.hpp"

#include "wiredsys/error.hpp"

namespace wiredsys::wd {

std::size_t carrier_size(const std::vector<PortType>& ports) {
  std::size_t n = 1;
  for (const PortType& t : ports) {
    if (!is_finite(t)) throw Error("expected a finite port type");
    n *= cardinality(t);
  }
  return n;
}

std::size_t tuple_to_index(const std::vector<PortType>& ports, const Tuple& t) {
  if (t.size() != ports.size()) throw Error("tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t p = 0; p < ports.size(); ++p) {
    const std::size_t card = cardinality(ports[p]);
    if (t[p] >= card) throw Error("tuple value out of carrier range");
    idx = idx * card + t[p];
  }
  return idx;
}

Tuple index_to_tuple(const std::vector<PortType>& ports, std::size_t index) {
  Tuple t(ports.size(), 0);
  for (std::size_t p = ports.size(); p-- > 0;) {
    const std::size_t card = cardinality(ports[p]);
    t[p] = index % card;
    index /= card;
  }
  return t;
}

std::vector<Tuple> enumerate_carrier(const std::vector<PortType>& ports) {
  const std::size_t n = carrier_size(ports);
  std::vector<Tuple> all;
  all.reserve(n);
  for (std::size_t i = 0; i < n; ++i) all.push_back(index_to_tuple(ports, i));
  return all;
}

}  // namespace wiredsys::wd
