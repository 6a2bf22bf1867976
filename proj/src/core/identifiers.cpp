#include "causal_loom/identifiers.hpp"

#include "causal_loom/error.hpp"

#include <cctype>

namespace causal_loom {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

bool is_identifier(std::string_view text) noexcept {
    if (text.empty()) return false;
    auto head = static_cast<unsigned char>(text.front());
    if (!(std::isalpha(head) || head == '_') || head > 127) return false;
    for (char c : text) {
        auto u = static_cast<unsigned char>(c);
        if (u > 127 || !(std::isalnum(u) || u == '_')) return false;
    }
    return true;
}

std::strong_ordering natural_compare(std::string_view a, std::string_view b) noexcept {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (is_digit(a[i]) && is_digit(b[j])) {
            std::size_t ai = i;
            std::size_t bj = j;
            while (ai < a.size() && a[ai] == '0') ++ai;
            while (bj < b.size() && b[bj] == '0') ++bj;
            std::size_t ae = ai;
            std::size_t be = bj;
            while (ae < a.size() && is_digit(a[ae])) ++ae;
            while (be < b.size() && is_digit(b[be])) ++be;
            // Longer significant run is the larger number.
            if (auto c = (ae - ai) <=> (be - bj); c != 0) return c;
            if (auto c = a.substr(ai, ae - ai).compare(b.substr(bj, be - bj)) <=> 0; c != 0)
                return c;
            i = ae;
            j = be;
            continue;
        }
        if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) <=> static_cast<unsigned char>(b[j]);
        ++i;
        ++j;
    }
    if (auto c = (a.size() - i) <=> (b.size() - j); c != 0) return c;
    return a.compare(b) <=> 0;
}

VariableId::VariableId(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_)) throw ModelError("invalid variable name '" + name_ + "'");
}

EquationId::EquationId(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_)) throw ModelError("invalid equation id '" + name_ + "'");
}

} // namespace causal_loom
