#pragma once

#include "causal_loom/structural_system.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <vector>

namespace causal_loom {

namespace detail {

inline constexpr std::size_t unmatched = std::numeric_limits<std::size_t>::max();

/// Left vertices are equations, right vertices are variables.
struct BipartiteGraph {
    std::size_t right_count = 0;
    std::vector<std::vector<std::size_t>> adjacency; ///< per left vertex, ascending
};

struct Matching {
    std::vector<std::size_t> left_to_right;
    std::vector<std::size_t> right_to_left;
    std::size_t size = 0;
};

/// Hopcroft-Karp. Neighbours are scanned in adjacency order and free left
/// vertices in index order, so the result is a pure function of the input.
Matching maximum_matching(const BipartiteGraph& graph);

BipartiteGraph bipartite_view(const StructureMatrix& matrix);

} // namespace detail

/// A maximum-cardinality matching of equations to variables.
std::map<EquationId, VariableId> max_equation_matching(const StructuralSystem& system);

} // namespace causal_loom
