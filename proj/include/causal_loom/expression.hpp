#pragma once

#include "causal_loom/identifiers.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace causal_loom {

enum class BinaryOp { add, subtract, multiply, divide };

/// Immutable arithmetic expression tree. Copies share structure.
///
/// Negating a constant folds into the constant, so `-5` has exactly one
/// representation and text round trips are structural identities.
class Expression {
public:
    struct Constant;
    struct Variable;
    struct Negation;
    struct Binary;
    using Node = std::variant<Constant, Variable, Negation, Binary>;

    static Expression constant(double value);
    static Expression variable(VariableId name);
    static Expression negate(Expression operand);
    static Expression binary(BinaryOp op, Expression lhs, Expression rhs);

    const Node& node() const noexcept;

    /// Distinct variable references in first-appearance (left-to-right) order.
    std::vector<VariableId> free_variables() const;
    bool references(const VariableId& name) const;

    /// Every reference to `from` replaced by `to`.
    Expression substitute(const VariableId& from, const VariableId& to) const;

    /// Evaluates with `lookup`, which returns nullopt for unknown variables.
    /// Returns nullopt if any referenced variable is unknown. Throws
    /// EvaluationError on division by zero or a non-finite intermediate.
    std::optional<double> evaluate(
        const std::function<std::optional<double>(const VariableId&)>& lookup) const;

    friend bool operator==(const Expression& a, const Expression& b);

private:
    explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct Expression::Constant {
    double value;
};

struct Expression::Variable {
    VariableId name;
};

struct Expression::Negation {
    Expression operand;
};

struct Expression::Binary {
    BinaryOp op;
    Expression lhs;
    Expression rhs;
};

inline const Expression::Node& Expression::node() const noexcept { return *node_; }

} // namespace causal_loom
