#pragma once

// The `.sem` model format, one statement per line:
//
//   # comment to end of line
//   var NS { manipulativity: manipulatable, observability: observable }
//   f1: NS = 22102                 value assignment
//   f3: SFR = NS / NF              solved (explicit) form
//   f10(FS, OI, TA, O, NS, NF)     participation only
//
// Expressions use + - * /, unary minus and parentheses over decimal
// literals and variable names. Function-call syntax is reserved.

#include "causal_loom/equation.hpp"
#include "causal_loom/expression.hpp"
#include "causal_loom/structural_system.hpp"

#include <string>
#include <string_view>

namespace causal_loom {

/// Throws ParseError (with line and column) on malformed text, an empty
/// model, duplicate ids or declarations, unknown attribute keywords, and
/// declarations of variables that never participate.
StructuralSystem parse_model(std::string_view text);

/// Canonical text: non-default variable declarations by name, then
/// equations by id. LF line endings.
std::string serialize_model(const StructuralSystem& system);

/// Parses an equation body without its id: "SFR = NS / NF" or
/// "(FS, OI, TA)". Throws ParseError with line 1.
Equation parse_equation_body(const EquationId& id, std::string_view body);

std::string format_equation_body(const Equation& equation);
std::string format_equation(const Equation& equation);

Expression parse_expression(std::string_view text);

/// Minimal parentheses; constants in shortest round-trip form.
std::string format_expression(const Expression& expression);
std::string format_number(double value);

/// The `{ ... }` block of a declaration, without the leading name.
std::string format_attributes(const VariableAttributes& attributes);

} // namespace causal_loom
