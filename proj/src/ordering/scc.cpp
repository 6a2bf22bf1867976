#include "causal_loom/scc.hpp"

#include <algorithm>
#include <limits>

namespace causal_loom::detail {

std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& successors) {
    constexpr auto unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = successors.size();

    std::vector<std::size_t> index(n, unvisited);
    std::vector<std::size_t> lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t next_index = 0;

    // (vertex, position of the next successor to examine)
    std::vector<std::pair<std::size_t, std::size_t>> frames;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < successors[v].size()) {
                std::size_t w = successors[v][pos++];
                if (index[w] == unvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }

            std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) {
                auto parent = frames.back().first;
                lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
            }
            if (lowlink[done] == index[done]) {
                std::vector<std::size_t> component;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component.push_back(w);
                } while (w != done);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
        }
    }
    return components;
}

} // namespace causal_loom::detail
