#include "causal_loom/sem_format.hpp"

#include "causal_loom/error.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace causal_loom {

namespace {

bool ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

/// Character cursor over one source line.
class LineParser {
public:
    LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
        throw ParseError(line_, pos + 1, message);
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    std::size_t position() {
        skip_space();
        return pos_;
    }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'" + found());
    }

    std::string found() {
        if (at_end()) return ", found end of line";
        return std::string(", found '") + text_[pos_] + "'";
    }

    std::string identifier(const char* what) {
        if (!ident_start(peek())) fail(std::string("expected ") + what + found());
        auto start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Attribute values: identifiers that may contain '-'.
    std::string word() {
        if (!ident_start(peek())) fail("expected attribute value" + found());
        auto start = pos_;
        while (pos_ < text_.size() && (ident_char(text_[pos_]) || text_[pos_] == '-')) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    double number() {
        if (!digit(peek())) fail("expected number" + found());
        auto start = pos_;
        while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            if (pos_ >= text_.size() || !digit(text_[pos_])) fail("expected digits after '.'");
            while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ >= text_.size() || !digit(text_[pos_])) fail("expected exponent digits");
            while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size()) {
            char next = text_[pos_];
            bool separator = next == '_' ||
                             (next == ',' && pos_ + 1 < text_.size() && digit(text_[pos_ + 1]));
            if (separator) fail("digit separators are not allowed in numbers");
            if (ident_char(next) || next == '.') fail(std::string("unexpected '") + next + "' in number");
        }
        double value = 0.0;
        auto literal = text_.substr(start, pos_ - start);
        auto [end, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
        if (ec != std::errc{} || end != literal.data() + literal.size() || !std::isfinite(value))
            fail_at(start, "number out of range");
        return value;
    }

    Expression expression() {
        auto lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expression::binary(BinaryOp::add, lhs, term());
            } else if (accept('-')) {
                lhs = Expression::binary(BinaryOp::subtract, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    Expression term() {
        auto lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expression::binary(BinaryOp::multiply, lhs, unary());
            } else if (accept('/')) {
                lhs = Expression::binary(BinaryOp::divide, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    Expression unary() {
        if (accept('-')) return Expression::negate(unary());
        return primary();
    }

    Expression primary() {
        char c = peek();
        if (accept('(')) {
            auto inner = expression();
            expect(')');
            return inner;
        }
        if (digit(c)) return Expression::constant(number());
        if (ident_start(c)) {
            auto start = position();
            auto name = identifier("variable");
            if (peek() == '(') fail_at(start, "function calls are not supported ('" + name + "')");
            return Expression::variable(VariableId(name));
        }
        fail("expected expression" + found());
    }

    std::vector<VariableId> participant_list() {
        expect('(');
        std::vector<VariableId> out;
        do {
            out.emplace_back(identifier("variable name"));
        } while (accept(','));
        expect(')');
        return out;
    }

    /// "LHS = expr" or "(A, B, ...)".
    Equation equation_body(const EquationId& id) {
        if (peek() == '(') return Equation::participation(id, participant_list());
        VariableId lhs(identifier("left-hand-side variable"));
        expect('=');
        auto rhs = expression();
        return Equation::solved(id, std::move(lhs), std::move(rhs));
    }

    VariableAttributes attribute_block() {
        VariableAttributes attrs;
        expect('{');
        if (accept('}')) return attrs;
        std::set<std::string> seen;
        do {
            auto key_pos = position();
            auto key = identifier("attribute keyword");
            if (!seen.insert(key).second) fail_at(key_pos, "attribute '" + key + "' given twice");
            expect(':');
            auto value_pos = position();
            if (key == "manipulativity") {
                auto value = word();
                auto m = parse_manipulativity(value);
                if (!m) fail_at(value_pos, "unknown manipulativity '" + value + "'");
                attrs.manipulativity = *m;
            } else if (key == "observability") {
                auto value = word();
                auto o = parse_observability(value);
                if (!o) fail_at(value_pos, "unknown observability '" + value + "'");
                attrs.observability = *o;
            } else if (key == "manipulation_cost") {
                attrs.manipulation_cost = number();
            } else if (key == "observation_cost") {
                attrs.observation_cost = number();
            } else {
                fail_at(key_pos, "unknown attribute keyword '" + key + "'");
            }
        } while (accept(','));
        expect('}');
        return attrs;
    }

    void expect_end() {
        if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    }

    /// True if the line opens with `var` followed by another identifier.
    bool declaration_ahead() {
        auto save = pos_;
        bool result = false;
        if (ident_start(peek())) {
            auto word = identifier("identifier");
            if (word == "var") result = ident_start(peek());
        }
        pos_ = save;
        return result;
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

template <typename F>
auto as_parse_error(LineParser& p, std::size_t pos, F&& f) {
    try {
        return f();
    } catch (const ModelError& e) {
        p.fail_at(pos, e.what());
    }
}

int precedence(const Expression& e) {
    if (const auto* b = std::get_if<Expression::Binary>(&e.node()))
        return b->op == BinaryOp::add || b->op == BinaryOp::subtract ? 1 : 2;
    return 3;
}

char symbol(BinaryOp op) {
    switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::subtract: return '-';
    case BinaryOp::multiply: return '*';
    case BinaryOp::divide: return '/';
    }
    return '?';
}

void write(std::ostream& os, const Expression& e) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expression::Constant>) {
                os << format_number(n.value);
            } else if constexpr (std::is_same_v<T, Expression::Variable>) {
                os << n.name;
            } else if constexpr (std::is_same_v<T, Expression::Negation>) {
                bool wrap = precedence(n.operand) < 3;
                os << '-' << (wrap ? "(" : "");
                write(os, n.operand);
                os << (wrap ? ")" : "");
            } else {
                int p = precedence(e);
                bool wrap_l = precedence(n.lhs) < p;
                bool wrap_r = precedence(n.rhs) <= p;
                if (wrap_l) os << '(';
                write(os, n.lhs);
                if (wrap_l) os << ')';
                os << ' ' << symbol(n.op) << ' ';
                if (wrap_r) os << '(';
                write(os, n.rhs);
                if (wrap_r) os << ')';
            }
        },
        e.node());
}

} // namespace

StructuralSystem parse_model(std::string_view text) {
    std::vector<Equation> equations;
    std::map<EquationId, std::size_t> equation_lines;
    AttributeMap attributes;
    std::map<VariableId, std::pair<std::size_t, std::size_t>> declared_at;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = strip_comment(text.substr(start, end - start));
        ++line_no;
        start = end + 1;

        LineParser p(line, line_no);
        if (p.at_end()) continue;

        if (p.declaration_ahead()) {
            p.identifier("var");
            auto name_pos = p.position();
            auto name = as_parse_error(p, name_pos, [&] { return VariableId(p.identifier("variable name")); });
            VariableAttributes attrs;
            if (p.peek() == '{') attrs = p.attribute_block();
            p.expect_end();
            if (declared_at.contains(name)) p.fail_at(name_pos, "variable " + name.str() + " declared twice");
            declared_at.emplace(name, std::pair{line_no, name_pos + 1});
            attributes.emplace(std::move(name), attrs);
            continue;
        }

        auto id_pos = p.position();
        EquationId id(p.identifier("equation id"));
        if (equation_lines.contains(id)) p.fail_at(id_pos, "duplicate equation id " + id.str());
        if (p.peek() != '(') p.expect(':');
        auto body_pos = p.position();
        auto eq = as_parse_error(p, body_pos, [&] { return p.equation_body(id); });
        p.expect_end();
        equation_lines.emplace(id, line_no);
        equations.push_back(std::move(eq));
    }

    if (equations.empty()) throw ParseError(1, 1, "empty model: no equations");
    for (const auto& [name, where] : declared_at) {
        bool used = std::any_of(equations.begin(), equations.end(),
                                [&](const Equation& e) { return e.involves(name); });
        if (!used)
            throw ParseError(where.first, where.second,
                             "variable " + name.str() + " participates in no equation");
    }
    try {
        return build_system(std::move(equations), std::move(attributes));
    } catch (const ModelError& e) {
        throw ParseError(1, 1, e.what());
    }
}

Equation parse_equation_body(const EquationId& id, std::string_view body) {
    LineParser p(body, 1);
    auto eq = as_parse_error(p, p.position(), [&] { return p.equation_body(id); });
    p.expect_end();
    return eq;
}

Expression parse_expression(std::string_view text) {
    LineParser p(text, 1);
    auto e = as_parse_error(p, p.position(), [&] { return p.expression(); });
    p.expect_end();
    return e;
}

std::string format_number(double value) {
    char buf[64];
    double magnitude = std::fabs(value);
    auto format = magnitude == 0.0 || (magnitude >= 1e-4 && magnitude < 1e15)
                      ? std::chars_format::fixed
                      : std::chars_format::scientific;
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, format);
    if (ec != std::errc{}) throw ModelError("cannot format number");
    return std::string(buf, end);
}

std::string format_expression(const Expression& expression) {
    std::ostringstream os;
    write(os, expression);
    return os.str();
}

std::string format_equation_body(const Equation& equation) {
    if (const auto& form = equation.explicit_form())
        return form->lhs.str() + " = " + format_expression(form->rhs);
    std::string out = "(";
    for (std::size_t i = 0; i < equation.participants().size(); ++i) {
        if (i) out += ", ";
        out += equation.participants()[i].str();
    }
    return out + ")";
}

std::string format_equation(const Equation& equation) {
    auto body = format_equation_body(equation);
    return equation.explicit_form() ? equation.id().str() + ": " + body : equation.id().str() + body;
}

std::string format_attributes(const VariableAttributes& attributes) {
    std::string out = "{ manipulativity: ";
    out += to_string(attributes.manipulativity);
    out += ", observability: ";
    out += to_string(attributes.observability);
    if (attributes.manipulation_cost)
        out += ", manipulation_cost: " + format_number(*attributes.manipulation_cost);
    if (attributes.observation_cost)
        out += ", observation_cost: " + format_number(*attributes.observation_cost);
    return out + " }";
}

std::string serialize_model(const StructuralSystem& system) {
    std::string out;
    bool any_declaration = false;
    for (const auto& [name, attrs] : system.variables()) {
        if (attrs.is_default()) continue;
        out += "var " + name.str() + " " + format_attributes(attrs) + "\n";
        any_declaration = true;
    }
    if (any_declaration) out += "\n";
    for (const auto& eq : system.equations()) out += format_equation(eq) + "\n";
    return out;
}

} // namespace causal_loom
