#pragma once

#include <cstddef>
#include <vector>

namespace causal_loom::detail {

/// Tarjan's algorithm, iterative. Components come out in reverse topological
/// order of the condensation (sinks first); vertices inside a component are
/// sorted ascending.
std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& successors);

} // namespace causal_loom::detail
