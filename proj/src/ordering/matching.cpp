#include "causal_loom/matching.hpp"

#include <deque>

namespace causal_loom {

namespace detail {

namespace {

constexpr auto infinite = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
public:
    explicit HopcroftKarp(const BipartiteGraph& graph) : graph_(graph) {
        matching_.left_to_right.assign(graph.adjacency.size(), unmatched);
        matching_.right_to_left.assign(graph.right_count, unmatched);
        distance_.assign(graph.adjacency.size(), infinite);
    }

    Matching run() {
        while (layer()) {
            for (std::size_t u = 0; u < graph_.adjacency.size(); ++u) {
                if (matching_.left_to_right[u] == unmatched && augment(u)) ++matching_.size;
            }
        }
        return std::move(matching_);
    }

private:
    bool layer() {
        std::deque<std::size_t> queue;
        for (std::size_t u = 0; u < graph_.adjacency.size(); ++u) {
            if (matching_.left_to_right[u] == unmatched) {
                distance_[u] = 0;
                queue.push_back(u);
            } else {
                distance_[u] = infinite;
            }
        }
        bool reachable_free = false;
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto v : graph_.adjacency[u]) {
                auto w = matching_.right_to_left[v];
                if (w == unmatched) {
                    reachable_free = true;
                } else if (distance_[w] == infinite) {
                    distance_[w] = distance_[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        return reachable_free;
    }

    bool augment(std::size_t u) {
        for (auto v : graph_.adjacency[u]) {
            auto w = matching_.right_to_left[v];
            if (w == unmatched || (distance_[w] == distance_[u] + 1 && augment(w))) {
                matching_.left_to_right[u] = v;
                matching_.right_to_left[v] = u;
                return true;
            }
        }
        distance_[u] = infinite;
        return false;
    }

    const BipartiteGraph& graph_;
    Matching matching_;
    std::vector<std::size_t> distance_;
};

} // namespace

Matching maximum_matching(const BipartiteGraph& graph) { return HopcroftKarp(graph).run(); }

BipartiteGraph bipartite_view(const StructureMatrix& matrix) {
    return BipartiteGraph{matrix.columns.size(), matrix.entries};
}

} // namespace detail

std::map<EquationId, VariableId> max_equation_matching(const StructuralSystem& system) {
    auto matrix = structure_matrix(system);
    auto matching = detail::maximum_matching(detail::bipartite_view(matrix));
    std::map<EquationId, VariableId> out;
    for (std::size_t e = 0; e < matrix.rows.size(); ++e) {
        auto v = matching.left_to_right[e];
        if (v != detail::unmatched) out.emplace(matrix.rows[e], matrix.columns[v]);
    }
    return out;
}

} // namespace causal_loom
