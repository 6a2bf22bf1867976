#include "causal_loom/expression.hpp"

#include "causal_loom/error.hpp"

#include <algorithm>
#include <cmath>

namespace causal_loom {

Expression Expression::constant(double value) {
    if (!std::isfinite(value)) throw ModelError("constants must be finite");
    return Expression(std::make_shared<const Node>(Constant{value}));
}

Expression Expression::variable(VariableId name) {
    return Expression(std::make_shared<const Node>(Variable{std::move(name)}));
}

Expression Expression::negate(Expression operand) {
    if (const auto* c = std::get_if<Constant>(&operand.node())) return constant(-c->value);
    return Expression(std::make_shared<const Node>(Negation{std::move(operand)}));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
    return Expression(std::make_shared<const Node>(Binary{op, std::move(lhs), std::move(rhs)}));
}

namespace {

void collect(const Expression& e, std::vector<VariableId>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expression::Variable>) {
                if (std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
            } else if constexpr (std::is_same_v<T, Expression::Negation>) {
                collect(n.operand, out);
            } else if constexpr (std::is_same_v<T, Expression::Binary>) {
                collect(n.lhs, out);
                collect(n.rhs, out);
            }
        },
        e.node());
}

double checked(double value) {
    if (!std::isfinite(value)) throw EvaluationError("non-finite intermediate value");
    return value;
}

} // namespace

std::vector<VariableId> Expression::free_variables() const {
    std::vector<VariableId> out;
    collect(*this, out);
    return out;
}

bool Expression::references(const VariableId& name) const {
    auto vars = free_variables();
    return std::find(vars.begin(), vars.end(), name) != vars.end();
}

Expression Expression::substitute(const VariableId& from, const VariableId& to) const {
    return std::visit(
        [&](const auto& n) -> Expression {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return *this;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return n.name == from ? variable(to) : *this;
            } else if constexpr (std::is_same_v<T, Negation>) {
                return negate(n.operand.substitute(from, to));
            } else {
                return binary(n.op, n.lhs.substitute(from, to), n.rhs.substitute(from, to));
            }
        },
        node());
}

std::optional<double> Expression::evaluate(
    const std::function<std::optional<double>(const VariableId&)>& lookup) const {
    return std::visit(
        [&](const auto& n) -> std::optional<double> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return checked(n.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                auto v = lookup(n.name);
                if (v) checked(*v);
                return v;
            } else if constexpr (std::is_same_v<T, Negation>) {
                auto v = n.operand.evaluate(lookup);
                if (!v) return std::nullopt;
                return -*v;
            } else {
                auto l = n.lhs.evaluate(lookup);
                if (!l) return std::nullopt;
                auto r = n.rhs.evaluate(lookup);
                if (!r) return std::nullopt;
                switch (n.op) {
                case BinaryOp::add: return checked(*l + *r);
                case BinaryOp::subtract: return checked(*l - *r);
                case BinaryOp::multiply: return checked(*l * *r);
                case BinaryOp::divide:
                    if (*r == 0.0) throw EvaluationError("division by zero");
                    return checked(*l / *r);
                }
                return std::nullopt;
            }
        },
        node());
}

bool operator==(const Expression& a, const Expression& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = a.node();
    const auto& y = b.node();
    if (x.index() != y.index()) return false;
    if (const auto* c = std::get_if<Expression::Constant>(&x))
        return c->value == std::get<Expression::Constant>(y).value;
    if (const auto* v = std::get_if<Expression::Variable>(&x))
        return v->name == std::get<Expression::Variable>(y).name;
    if (const auto* n = std::get_if<Expression::Negation>(&x))
        return n->operand == std::get<Expression::Negation>(y).operand;
    const auto& p = std::get<Expression::Binary>(x);
    const auto& q = std::get<Expression::Binary>(y);
    return p.op == q.op && p.lhs == q.lhs && p.rhs == q.rhs;
}

} // namespace causal_loom
