#pragma once

#include <optional>
#include <string_view>

namespace causal_loom {

enum class Manipulativity { truly_exogenous, manipulatable, truly_endogenous };
enum class Observability { observable, unobservable };

std::string_view to_string(Manipulativity m) noexcept;
std::string_view to_string(Observability o) noexcept;
std::optional<Manipulativity> parse_manipulativity(std::string_view text) noexcept;
std::optional<Observability> parse_observability(std::string_view text) noexcept;

/// Per-variable modelling metadata. Costs are stored, never interpreted.
struct VariableAttributes {
    Manipulativity manipulativity = Manipulativity::manipulatable;
    Observability observability = Observability::observable;
    std::optional<double> manipulation_cost;
    std::optional<double> observation_cost;

    /// Throws ModelError unless every present cost is finite and >= 0.
    void validate() const;
    bool is_default() const noexcept { return *this == VariableAttributes{}; }

    friend bool operator==(const VariableAttributes&, const VariableAttributes&) = default;
};

} // namespace causal_loom
