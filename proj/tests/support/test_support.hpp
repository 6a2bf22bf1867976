#pragma once

#include "causal_loom/ordering.hpp"
#include "causal_loom/sem_format.hpp"
#include "causal_loom/structural_system.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace causal_loom::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(CAUSAL_LOOM_FIXTURES) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline StructuralSystem load_fixture(const std::string& name) {
    return parse_model(read_file(fixture_path(name)));
}

inline EquationId eq(const char* name) { return EquationId(name); }
inline VariableId var(const char* name) { return VariableId(name); }

inline std::vector<VariableId> vars(std::initializer_list<const char*> names) {
    std::vector<VariableId> out;
    for (auto n : names) out.emplace_back(n);
    return out;
}

inline std::vector<EquationId> eqs(std::initializer_list<const char*> names) {
    std::vector<EquationId> out;
    for (auto n : names) out.emplace_back(n);
    return out;
}

/// Participation-only system from {"f1", {"A", "B"}} pairs.
inline StructuralSystem participation_system(
    std::initializer_list<std::pair<const char*, std::initializer_list<const char*>>> rows) {
    std::vector<Equation> equations;
    for (const auto& [id, participants] : rows)
        equations.push_back(Equation::participation(EquationId(id), vars(participants)));
    return build_system(std::move(equations));
}

using ArcTriple = std::tuple<std::string, std::string, std::string>;

/// Arcs as (tail, head, kind) strings, e.g. {"NS", "SFR", "directed"}.
inline std::set<ArcTriple> arc_set(const CausalGraph& graph) {
    std::set<ArcTriple> out;
    for (const auto& a : graph.arcs())
        out.emplace(a.tail.str(), a.head.str(), std::string(to_string(a.kind)));
    return out;
}

inline std::vector<std::string> names(const std::vector<VariableId>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

} // namespace causal_loom::testing
