#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace causal_loom {

/// True for `[A-Za-z_][A-Za-z0-9_]*`.
bool is_identifier(std::string_view text) noexcept;

/// Orders strings with embedded digit runs numerically, so "f2" < "f10".
/// Total order: ties between differently padded numbers ("f01", "f1")
/// fall back to plain byte comparison.
std::strong_ordering natural_compare(std::string_view a, std::string_view b) noexcept;

/// Name of a variable. Case-sensitive identifier; ordered by bytes.
class VariableId {
public:
    explicit VariableId(std::string name);

    const std::string& str() const noexcept { return name_; }

    friend bool operator==(const VariableId&, const VariableId&) = default;
    friend std::strong_ordering operator<=>(const VariableId& a, const VariableId& b) noexcept {
        return a.name_.compare(b.name_) <=> 0;
    }

private:
    std::string name_;
};

/// Identifier of an equation, e.g. "f3". Ordered naturally.
class EquationId {
public:
    explicit EquationId(std::string name);

    const std::string& str() const noexcept { return name_; }

    friend bool operator==(const EquationId&, const EquationId&) = default;
    friend std::strong_ordering operator<=>(const EquationId& a, const EquationId& b) noexcept {
        return natural_compare(a.name_, b.name_);
    }

private:
    std::string name_;
};

inline std::ostream& operator<<(std::ostream& os, const VariableId& v) { return os << v.str(); }
inline std::ostream& operator<<(std::ostream& os, const EquationId& e) { return os << e.str(); }

} // namespace causal_loom

template <>
struct std::hash<causal_loom::VariableId> {
    std::size_t operator()(const causal_loom::VariableId& v) const noexcept {
        return std::hash<std::string>{}(v.str());
    }
};

template <>
struct std::hash<causal_loom::EquationId> {
    std::size_t operator()(const causal_loom::EquationId& e) const noexcept {
        return std::hash<std::string>{}(e.str());
    }
};
