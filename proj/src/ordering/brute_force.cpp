#include "causal_loom/brute_force.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>

namespace causal_loom {

namespace {

using Mask = std::uint32_t;

void require_small(const StructuralSystem& system) {
    if (system.equation_count() > brute_force_max_equations)
        throw ModelError("brute-force enumeration limited to " +
                         std::to_string(brute_force_max_equations) + " equations");
}

std::set<VariableId> variables_of(const std::vector<std::set<VariableId>>& rows, Mask mask) {
    std::set<VariableId> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (mask & (Mask{1} << i)) out.insert(rows[i].begin(), rows[i].end());
    }
    return out;
}

} // namespace

std::optional<OverConstraintWitness> brute_force_hall_violation(const StructuralSystem& system) {
    require_small(system);
    std::vector<std::set<VariableId>> rows;
    for (const auto& eq : system.equations())
        rows.emplace_back(eq.participants().begin(), eq.participants().end());

    const Mask full = (Mask{1} << rows.size()) - 1;
    for (Mask mask = 1; mask <= full && full != 0; ++mask) {
        auto vars = variables_of(rows, mask);
        if (static_cast<std::size_t>(std::popcount(mask)) > vars.size()) {
            OverConstraintWitness w;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (mask & (Mask{1} << i)) w.equations.push_back(system.equations()[i].id());
            }
            w.variables.assign(vars.begin(), vars.end());
            return w;
        }
    }
    return std::nullopt;
}

OrderingResult brute_force_ordering(const StructuralSystem& system) {
    require_small(system);
    if (auto w = brute_force_hall_violation(system)) throw OverConstrainedError(*w);

    const auto& equations = system.equations();
    OrderingResult result;
    result.system_class = equations.size() == system.variable_count()
                              ? SystemClass::self_contained
                              : SystemClass::under_constrained;

    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < equations.size(); ++i) remaining.push_back(i);
    std::set<VariableId> solved;

    auto derived_rows = [&] {
        std::vector<std::set<VariableId>> rows;
        for (auto i : remaining) {
            std::set<VariableId> row;
            for (const auto& v : equations[i].participants()) {
                if (!solved.contains(v)) row.insert(v);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };

    for (std::size_t order = 0; !remaining.empty(); ++order) {
        auto rows = derived_rows();
        const std::size_t k = rows.size();
        const Mask full = (Mask{1} << k) - 1;

        std::vector<bool> self_contained(std::size_t{full} + 1, false);
        for (Mask mask = 1; mask <= full; ++mask) {
            self_contained[mask] =
                static_cast<std::size_t>(std::popcount(mask)) == variables_of(rows, mask).size();
        }
        std::vector<Mask> minimal;
        for (Mask mask = 1; mask <= full; ++mask) {
            if (!self_contained[mask]) continue;
            bool has_smaller = false;
            for (Mask sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
                if (self_contained[sub]) {
                    has_smaller = true;
                    break;
                }
            }
            if (!has_smaller) minimal.push_back(mask);
        }
        if (minimal.empty()) break;
        std::sort(minimal.begin(), minimal.end(),
                  [](Mask a, Mask b) { return std::countr_zero(a) < std::countr_zero(b); });

        std::set<VariableId> newly_solved;
        std::set<std::size_t> consumed;
        for (Mask mask : minimal) {
            CompleteSubset subset;
            subset.order = order;
            std::set<VariableId> original;
            for (std::size_t pos = 0; pos < k; ++pos) {
                if (!(mask & (Mask{1} << pos))) continue;
                const auto& eq = equations[remaining[pos]];
                subset.equations.push_back(eq.id());
                original.insert(eq.participants().begin(), eq.participants().end());
                consumed.insert(pos);
            }
            auto own = variables_of(rows, mask);
            subset.variables.assign(own.begin(), own.end());
            for (const auto& v : own) result.graph.add_node(v, order);
            for (const auto& from : original) {
                if (own.contains(from)) continue;
                for (const auto& to : own) result.graph.add_arc(from, to, ArcKind::directed);
            }
            for (const auto& a : own) {
                for (const auto& b : own) {
                    if (a < b) result.graph.add_arc(a, b, ArcKind::bidirected);
                }
            }
            newly_solved.insert(own.begin(), own.end());
            result.complete_subsets.push_back(std::move(subset));
        }
        solved.insert(newly_solved.begin(), newly_solved.end());
        std::vector<std::size_t> next;
        for (std::size_t pos = 0; pos < k; ++pos) {
            if (!consumed.contains(pos)) next.push_back(remaining[pos]);
        }
        remaining = std::move(next);
    }

    auto rows = derived_rows();
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
        const auto& eq = equations[remaining[pos]];
        result.residual.push_back(eq.id());
        for (const auto& v : rows[pos]) result.graph.add_node(v, std::nullopt);
        for (const auto& v : eq.participants()) {
            if (rows[pos].contains(v)) continue;
            for (const auto& to : rows[pos]) result.graph.add_arc(v, to, ArcKind::directed);
        }
        for (const auto& a : rows[pos]) {
            for (const auto& b : rows[pos]) {
                if (a < b) result.graph.add_arc(a, b, ArcKind::undirected);
            }
        }
    }
    return result;
}

} // namespace causal_loom
