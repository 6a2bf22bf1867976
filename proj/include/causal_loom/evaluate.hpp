#pragma once

#include "causal_loom/ordering.hpp"
#include "causal_loom/structural_system.hpp"

#include <map>

namespace causal_loom {

using ValueTable = std::map<VariableId, double>;

/// Substitutes values forward along the causal ordering. A variable gets a
/// value only when its complete subset is a single equation written in solved
/// form for exactly that variable and every right-hand-side variable already
/// has one. Everything else (coupled blocks, residual equations, implicit
/// equations, equations solved for a different variable) is left out.
///
/// Throws EvaluationError, naming the equation, on division by zero or a
/// non-finite value; ModelError if `ordering` does not belong to `system`.
ValueTable evaluate_forward(const StructuralSystem& system, const OrderingResult& ordering);

} // namespace causal_loom
