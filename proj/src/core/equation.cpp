#include "causal_loom/equation.hpp"

#include "causal_loom/error.hpp"

#include <algorithm>
#include <set>

namespace causal_loom {

Equation::Equation(EquationId id, std::vector<VariableId> participants, EquationKind kind,
                   std::optional<ExplicitForm> form)
    : id_(std::move(id)), participants_(std::move(participants)), kind_(kind),
      form_(std::move(form)) {}

Equation Equation::participation(EquationId id, std::vector<VariableId> participants) {
    if (participants.empty())
        throw ModelError("equation " + id.str() + " has no participants");
    std::set<VariableId> seen;
    for (const auto& v : participants) {
        if (!seen.insert(v).second)
            throw ModelError("equation " + id.str() + " lists " + v.str() + " twice");
    }
    return Equation(std::move(id), std::move(participants), EquationKind::core, std::nullopt);
}

Equation Equation::solved(EquationId id, VariableId lhs, Expression rhs) {
    std::vector<VariableId> participants{lhs};
    for (auto& v : rhs.free_variables()) {
        if (v != lhs) participants.push_back(std::move(v));
    }
    auto kind = rhs.free_variables().empty() ? EquationKind::value_assignment
                                             : EquationKind::core;
    return Equation(std::move(id), std::move(participants), kind,
                    ExplicitForm{std::move(lhs), std::move(rhs)});
}

Equation Equation::value_assignment(EquationId id, VariableId variable, double value) {
    return solved(std::move(id), std::move(variable), Expression::constant(value));
}

bool Equation::involves(const VariableId& v) const {
    return std::find(participants_.begin(), participants_.end(), v) != participants_.end();
}

std::optional<double> Equation::assigned_value() const {
    if (kind_ != EquationKind::value_assignment) return std::nullopt;
    return form_->rhs.evaluate([](const VariableId&) { return std::nullopt; });
}

Equation Equation::with_id(EquationId id) const {
    Equation copy = *this;
    copy.id_ = std::move(id);
    return copy;
}

Equation Equation::with_variable_replaced(const VariableId& from, const VariableId& to) const {
    if (form_) {
        auto lhs = form_->lhs == from ? to : form_->lhs;
        return solved(id_, std::move(lhs), form_->rhs.substitute(from, to));
    }
    std::vector<VariableId> out;
    out.reserve(participants_.size());
    for (const auto& v : participants_) {
        const auto& name = v == from ? to : v;
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
    return participation(id_, std::move(out));
}

} // namespace causal_loom
