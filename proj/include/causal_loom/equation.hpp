#pragma once

#include "causal_loom/expression.hpp"
#include "causal_loom/identifiers.hpp"

#include <optional>
#include <vector>

namespace causal_loom {

enum class EquationKind { core, value_assignment };

/// An equation written in solved form: `lhs = rhs`.
struct ExplicitForm {
    VariableId lhs;
    Expression rhs;

    friend bool operator==(const ExplicitForm&, const ExplicitForm&) = default;
};

/// One causal mechanism inside a structural system.
///
/// Participants are an ordered set. For equations with an explicit form they
/// are derived from it: the left-hand side first, then right-hand-side
/// variables in order of appearance. The kind is derived too: a solved form
/// whose right-hand side references no variable is a value assignment.
class Equation {
public:
    /// Participation-only (implicit) equation. Throws ModelError on an empty
    /// or duplicated participant list.
    static Equation participation(EquationId id, std::vector<VariableId> participants);
    static Equation solved(EquationId id, VariableId lhs, Expression rhs);
    static Equation value_assignment(EquationId id, VariableId variable, double value);

    const EquationId& id() const noexcept { return id_; }
    const std::vector<VariableId>& participants() const noexcept { return participants_; }
    EquationKind kind() const noexcept { return kind_; }
    const std::optional<ExplicitForm>& explicit_form() const noexcept { return form_; }

    bool involves(const VariableId& v) const;

    /// The assigned constant of a value-assignment equation.
    std::optional<double> assigned_value() const;

    Equation with_id(EquationId id) const;

    /// Replaces `from` by `to` everywhere. If `to` already participates the
    /// later occurrence is dropped.
    Equation with_variable_replaced(const VariableId& from, const VariableId& to) const;

    friend bool operator==(const Equation&, const Equation&) = default;

private:
    Equation(EquationId id, std::vector<VariableId> participants, EquationKind kind,
             std::optional<ExplicitForm> form);

    EquationId id_;
    std::vector<VariableId> participants_;
    EquationKind kind_;
    std::optional<ExplicitForm> form_;
};

} // namespace causal_loom
