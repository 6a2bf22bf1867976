#include "causal_loom/ordering.hpp"

#include "causal_loom/matching.hpp"
#include "causal_loom/scc.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace causal_loom {

std::string_view to_string(SystemClass c) noexcept {
    switch (c) {
    case SystemClass::self_contained: return "self-contained";
    case SystemClass::under_constrained: return "under-constrained";
    case SystemClass::over_constrained: return "over-constrained";
    }
    return "self-contained";
}

std::string_view to_string(ArcKind k) noexcept {
    switch (k) {
    case ArcKind::directed: return "directed";
    case ArcKind::bidirected: return "bidirected";
    case ArcKind::undirected: return "undirected";
    }
    return "directed";
}

void CausalGraph::add_node(const VariableId& v, SolveOrder order) {
    auto [it, inserted] = nodes_.emplace(v, order);
    if (!inserted && it->second != order)
        throw ModelError("node " + v.str() + " already has a different solve order");
}

void CausalGraph::add_arc(const VariableId& tail, const VariableId& head, ArcKind kind) {
    if (tail == head) throw ModelError("self-loop on " + tail.str());
    if (!nodes_.contains(tail) || !nodes_.contains(head))
        throw ModelError("arc " + tail.str() + " - " + head.str() + " has an unknown endpoint");
    if (kind != ArcKind::directed && head < tail) {
        arcs_.insert(Arc{head, tail, kind});
    } else {
        arcs_.insert(Arc{tail, head, kind});
    }
}

std::vector<VariableId> CausalGraph::parents(const VariableId& v) const {
    std::vector<VariableId> out;
    for (const auto& arc : arcs_) {
        if (arc.kind == ArcKind::directed && arc.head == v) out.push_back(arc.tail);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string describe(const OverConstraintWitness& w) {
    std::ostringstream os;
    os << "system is over-constrained: equations {";
    for (std::size_t i = 0; i < w.equations.size(); ++i) os << (i ? ", " : "") << w.equations[i];
    os << "} involve only variables {";
    for (std::size_t i = 0; i < w.variables.size(); ++i) os << (i ? ", " : "") << w.variables[i];
    os << "}";
    return os.str();
}

/// A derived system: a subset of the original rows, each restricted to the
/// still-unsolved columns. Indices refer to the original structure matrix.
struct DerivedRows {
    std::vector<std::size_t> equations;
    std::vector<std::vector<std::size_t>> rows;
};

DerivedRows derive(const StructureMatrix& matrix, const std::vector<std::size_t>& remaining,
                   const std::vector<bool>& solved) {
    DerivedRows d;
    d.equations = remaining;
    for (auto e : remaining) {
        std::vector<std::size_t> row;
        for (auto c : matrix.entries[e]) {
            if (!solved[c]) row.push_back(c);
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

StructuralSystem as_system(const StructureMatrix& matrix, const DerivedRows& d) {
    std::vector<Equation> equations;
    for (std::size_t i = 0; i < d.equations.size(); ++i) {
        std::vector<VariableId> participants;
        for (auto c : d.rows[i]) participants.push_back(matrix.columns[c]);
        equations.push_back(Equation::participation(matrix.rows[d.equations[i]], participants));
    }
    return make_system(std::move(equations), {}, true);
}

/// Minimal self-contained subsets of a non-over-constrained derived system,
/// as positions into `d.rows`.
///
/// Under a matching that saturates the equations, a self-contained subset is
/// exactly a set of equations closed under "uses a variable matched to", none
/// of which uses an unmatched variable. The minimal ones are the sink
/// components of that relation that are free of unmatched variables.
std::vector<std::vector<std::size_t>> minimal_subsets(const DerivedRows& d,
                                                      std::size_t column_count) {
    const std::size_t m = d.rows.size();
    detail::BipartiteGraph bipartite{column_count, d.rows};
    auto matching = detail::maximum_matching(bipartite);
    if (matching.size != m)
        throw std::logic_error("derived system is over-constrained");

    std::vector<bool> uses_free(m, false);
    std::vector<std::vector<std::size_t>> depends_on(m);
    for (std::size_t e = 0; e < m; ++e) {
        for (auto c : d.rows[e]) {
            auto owner = matching.right_to_left[c];
            if (owner == detail::unmatched) {
                uses_free[e] = true;
            } else if (owner != e) {
                depends_on[e].push_back(owner);
            }
        }
    }

    auto components = detail::strongly_connected_components(depends_on);
    std::vector<std::size_t> component_of(m);
    for (std::size_t k = 0; k < components.size(); ++k) {
        for (auto e : components[k]) component_of[e] = k;
    }

    std::vector<std::vector<std::size_t>> out;
    for (std::size_t k = 0; k < components.size(); ++k) {
        bool closed = std::all_of(components[k].begin(), components[k].end(), [&](std::size_t e) {
            return !uses_free[e] &&
                   std::all_of(depends_on[e].begin(), depends_on[e].end(),
                               [&](std::size_t t) { return component_of[t] == k; });
        });
        if (closed) out.push_back(components[k]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> sorted_union(const std::vector<std::vector<std::size_t>>& rows,
                                      const std::vector<std::size_t>& which) {
    std::vector<std::size_t> out;
    for (auto i : which) out.insert(out.end(), rows[i].begin(), rows[i].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void reject_over_constrained(const StructuralSystem& system) {
    if (auto witness = over_constraint_witness(system)) throw OverConstrainedError(*witness);
}

} // namespace

OverConstrainedError::OverConstrainedError(OverConstraintWitness witness)
    : Error(describe(witness)), witness_(std::move(witness)) {}

SystemClass classify(const StructuralSystem& system) {
    auto matrix = structure_matrix(system);
    auto matching = detail::maximum_matching(detail::bipartite_view(matrix));
    if (matching.size < matrix.rows.size()) return SystemClass::over_constrained;
    return matrix.rows.size() == matrix.columns.size() ? SystemClass::self_contained
                                                       : SystemClass::under_constrained;
}

std::optional<OverConstraintWitness> over_constraint_witness(const StructuralSystem& system) {
    auto matrix = structure_matrix(system);
    auto matching = detail::maximum_matching(detail::bipartite_view(matrix));
    auto first_free = std::find(matching.left_to_right.begin(), matching.left_to_right.end(),
                                detail::unmatched);
    if (first_free == matching.left_to_right.end()) return std::nullopt;

    // Every variable reachable by alternating paths is matched (otherwise the
    // matching would not be maximum), so the reached equations outnumber the
    // reached variables by exactly one.
    std::vector<bool> seen_eq(matrix.rows.size(), false);
    std::vector<bool> seen_var(matrix.columns.size(), false);
    std::deque<std::size_t> queue{
        static_cast<std::size_t>(first_free - matching.left_to_right.begin())};
    seen_eq[queue.front()] = true;
    while (!queue.empty()) {
        auto e = queue.front();
        queue.pop_front();
        for (auto c : matrix.entries[e]) {
            if (seen_var[c]) continue;
            seen_var[c] = true;
            auto next = matching.right_to_left[c];
            if (next != detail::unmatched && !seen_eq[next]) {
                seen_eq[next] = true;
                queue.push_back(next);
            }
        }
    }

    OverConstraintWitness witness;
    for (std::size_t e = 0; e < seen_eq.size(); ++e) {
        if (seen_eq[e]) witness.equations.push_back(matrix.rows[e]);
    }
    for (std::size_t c = 0; c < seen_var.size(); ++c) {
        if (seen_var[c]) witness.variables.push_back(matrix.columns[c]);
    }
    return witness;
}

std::vector<CompleteSubset> minimal_self_contained_subsets(const StructuralSystem& system) {
    reject_over_constrained(system);
    auto matrix = structure_matrix(system);
    DerivedRows all;
    for (std::size_t e = 0; e < matrix.rows.size(); ++e) all.equations.push_back(e);
    all.rows = matrix.entries;

    std::vector<CompleteSubset> out;
    for (const auto& subset : minimal_subsets(all, matrix.columns.size())) {
        CompleteSubset cs;
        for (auto e : subset) cs.equations.push_back(matrix.rows[e]);
        for (auto c : sorted_union(all.rows, subset)) cs.variables.push_back(matrix.columns[c]);
        out.push_back(std::move(cs));
    }
    return out;
}

OrderingResult causal_ordering(const StructuralSystem& system,
                               const DerivedSystemObserver& observer) {
    reject_over_constrained(system);

    OrderingResult result;
    result.system_class = classify(system);

    const auto matrix = structure_matrix(system);
    std::vector<bool> solved(matrix.columns.size(), false);
    std::vector<std::size_t> remaining(matrix.rows.size());
    for (std::size_t e = 0; e < remaining.size(); ++e) remaining[e] = e;

    const auto var = [&](std::size_t c) -> const VariableId& { return matrix.columns[c]; };

    std::size_t order = 0;
    DerivedRows derived;
    for (; !remaining.empty(); ++order) {
        derived = derive(matrix, remaining, solved);
        if (observer) observer(order, as_system(matrix, derived));

        auto subsets = minimal_subsets(derived, matrix.columns.size());
        if (subsets.empty()) break;

        std::vector<bool> consumed(derived.equations.size(), false);
        std::vector<std::size_t> newly_solved;
        for (const auto& subset : subsets) {
            std::vector<std::size_t> originals;
            CompleteSubset cs;
            cs.order = order;
            for (auto pos : subset) {
                consumed[pos] = true;
                originals.push_back(derived.equations[pos]);
                cs.equations.push_back(matrix.rows[derived.equations[pos]]);
            }
            auto subset_vars = sorted_union(derived.rows, subset);
            auto original_vars = sorted_union(matrix.entries, originals);

            for (auto c : subset_vars) {
                result.graph.add_node(var(c), order);
                cs.variables.push_back(var(c));
            }
            for (auto c : original_vars) {
                if (std::binary_search(subset_vars.begin(), subset_vars.end(), c)) continue;
                for (auto target : subset_vars) result.graph.add_arc(var(c), var(target), ArcKind::directed);
            }
            if (subset_vars.size() > 1) {
                for (std::size_t i = 0; i < subset_vars.size(); ++i) {
                    for (std::size_t j = i + 1; j < subset_vars.size(); ++j)
                        result.graph.add_arc(var(subset_vars[i]), var(subset_vars[j]), ArcKind::bidirected);
                }
            }
            newly_solved.insert(newly_solved.end(), subset_vars.begin(), subset_vars.end());
            result.complete_subsets.push_back(std::move(cs));
        }

        for (auto c : newly_solved) solved[c] = true;
        std::vector<std::size_t> next;
        for (std::size_t pos = 0; pos < derived.equations.size(); ++pos) {
            if (!consumed[pos]) next.push_back(derived.equations[pos]);
        }
        remaining = std::move(next);
    }

    // Whatever is left contains no self-contained subset.
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
        const auto e = remaining[pos];
        const auto& free_vars = derived.rows[pos];
        result.residual.push_back(matrix.rows[e]);
        for (auto c : free_vars) result.graph.add_node(var(c), std::nullopt);
        for (auto c : matrix.entries[e]) {
            if (!solved[c]) continue;
            for (auto target : free_vars) result.graph.add_arc(var(c), var(target), ArcKind::directed);
        }
        for (std::size_t i = 0; i < free_vars.size(); ++i) {
            for (std::size_t j = i + 1; j < free_vars.size(); ++j)
                result.graph.add_arc(var(free_vars[i]), var(free_vars[j]), ArcKind::undirected);
        }
    }
    return result;
}

std::vector<ReleaseCandidate> release_candidates(const StructuralSystem& system) {
    if (classify(system) != SystemClass::over_constrained)
        throw ModelError("release requested on a system that is not over-constrained");
    std::vector<ReleaseCandidate> out;
    for (const auto& eq : system.equations()) {
        bool valid = classify(remove_equation(system, eq.id())) != SystemClass::over_constrained;
        out.push_back({eq.id(), valid});
    }
    return out;
}

} // namespace causal_loom
