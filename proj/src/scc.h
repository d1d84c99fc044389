// scc.h -- internal strongly-connected-components helper.
#ifndef PAP_SCC_H
#define PAP_SCC_H

#include <utility>
#include <vector>

namespace pap::detail {

// Tarjan condensation over an adjacency list. Returns the component count
// and a component id per node. Ids follow completion order: for any edge
// u -> v crossing components, comp[v] < comp[u], so ascending ids visit
// dependencies first.
std::pair<int, std::vector<int>> scc_components(
    const std::vector<std::vector<int>>& adj);

}  // namespace pap::detail

#endif
