#pragma once

#include <cstddef>
#include <vector>

#include "wiredsys/wd/types.hpp"

namespace wiredsys::wd {

/// A value tuple over a list of finite ports: one label index per port.
using Tuple = std::vector<std::size_t>;

/// Product of the port cardinalities (1 for the empty list).
std::size_t carrier_size(const std::vector<PortType>& ports);

/// Mixed-radix flattening, first port most significant.
std::size_t tuple_to_index(const std::vector<PortType>& ports, const Tuple& t);
Tuple index_to_tuple(const std::vector<PortType>& ports, std::size_t index);

/// All tuples of the carrier in index order.
std::vector<Tuple> enumerate_carrier(const std::vector<PortType>& ports);

}  // namespace wiredsys::wd
