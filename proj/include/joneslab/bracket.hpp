#pragma once

#include <vector>

#include "joneslab/diagram.hpp"
#include "joneslab/options.hpp"
#include "joneslab/poly.hpp"

namespace joneslab {

// <D> by resolving crossings one at a time and splicing strands; closed
// strands become circles. Normalized so that <unknot> = 1.
LaurentPoly skein_bracket(const Diagram& d, int naive_limit = 22);

struct CrossingOrder {
    std::vector<int> order;
    int peak_width = 0;  // largest number of open endpoints along the order
};

CrossingOrder choose_order(const Diagram& d);
// Frontier width after each step of a given order.
std::vector<int> frontier_widths(const Diagram& d, const std::vector<int>& order);

// <D> by absorbing crossings into a tangle whose state is a perfect matching of
// the open endpoints; throws FrontierTooWide if the order exceeds the cap.
LaurentPoly fast_bracket(const Diagram& d, int frontier_cap = 20);
LaurentPoly fast_bracket(const Diagram& d, const std::vector<int>& order, int frontier_cap = 20);

LaurentPoly bracket(const Diagram& d, const EngineOptions& opt);

}  // namespace joneslab
