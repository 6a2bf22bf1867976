#include "causal_loom/evaluate.hpp"

#include "causal_loom/error.hpp"

namespace causal_loom {

namespace {

void require_consistent(const StructuralSystem& system, const OrderingResult& ordering) {
    const auto& nodes = ordering.graph.nodes();
    bool same_variables = nodes.size() == system.variable_count();
    for (auto it = nodes.begin(); same_variables && it != nodes.end(); ++it)
        same_variables = system.has_variable(it->first);
    if (!same_variables) throw ModelError("ordering was computed for a different system");
    for (const auto& subset : ordering.complete_subsets) {
        for (const auto& id : subset.equations) {
            if (!system.has_equation(id))
                throw ModelError("ordering references unknown equation " + id.str());
        }
    }
}

} // namespace

ValueTable evaluate_forward(const StructuralSystem& system, const OrderingResult& ordering) {
    require_consistent(system, ordering);

    ValueTable values;
    auto lookup = [&](const VariableId& v) -> std::optional<double> {
        auto it = values.find(v);
        if (it == values.end()) return std::nullopt;
        return it->second;
    };

    for (const auto& subset : ordering.complete_subsets) {
        if (subset.equations.size() != 1) continue;
        const auto& eq = system.equation(subset.equations.front());
        const auto& form = eq.explicit_form();
        if (!form || form->lhs != subset.variables.front()) continue;
        try {
            if (auto value = form->rhs.evaluate(lookup)) values.emplace(form->lhs, *value);
        } catch (const EvaluationError& e) {
            throw EvaluationError(e.what(), eq.id().str());
        }
    }
    return values;
}

} // namespace causal_loom
