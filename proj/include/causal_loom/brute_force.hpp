#pragma once

// Definition-driven reference implementations. Exponential; meant for
// cross-checking the matching-based engine on small systems.

#include "causal_loom/ordering.hpp"

#include <cstddef>
#include <optional>

namespace causal_loom {

inline constexpr std::size_t brute_force_max_equations = 12;

/// Causal ordering by enumerating every subset of each derived system.
/// Throws ModelError above brute_force_max_equations equations and
/// OverConstrainedError on over-constrained input.
OrderingResult brute_force_ordering(const StructuralSystem& system);

/// A smallest-index equation subset with ne > nv, found by enumeration.
std::optional<OverConstraintWitness> brute_force_hall_violation(const StructuralSystem& system);

} // namespace causal_loom
