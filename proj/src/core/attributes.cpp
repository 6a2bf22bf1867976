#include "causal_loom/attributes.hpp"

#include "causal_loom/error.hpp"

#include <cmath>
#include <string>

namespace causal_loom {

std::string_view to_string(Manipulativity m) noexcept {
    switch (m) {
    case Manipulativity::truly_exogenous: return "truly-exogenous";
    case Manipulativity::manipulatable: return "manipulatable";
    case Manipulativity::truly_endogenous: return "truly-endogenous";
    }
    return "manipulatable";
}

std::string_view to_string(Observability o) noexcept {
    return o == Observability::observable ? "observable" : "unobservable";
}

std::optional<Manipulativity> parse_manipulativity(std::string_view text) noexcept {
    if (text == "truly-exogenous") return Manipulativity::truly_exogenous;
    if (text == "manipulatable") return Manipulativity::manipulatable;
    if (text == "truly-endogenous") return Manipulativity::truly_endogenous;
    return std::nullopt;
}

std::optional<Observability> parse_observability(std::string_view text) noexcept {
    if (text == "observable") return Observability::observable;
    if (text == "unobservable") return Observability::unobservable;
    return std::nullopt;
}

void VariableAttributes::validate() const {
    auto check = [](const std::optional<double>& cost, const char* name) {
        if (cost && !(std::isfinite(*cost) && *cost >= 0.0))
            throw ModelError(std::string(name) + " must be finite and non-negative");
    };
    check(manipulation_cost, "manipulation_cost");
    check(observation_cost, "observation_cost");
}

} // namespace causal_loom
