#include "causal_loom/structural_system.hpp"

#include "causal_loom/error.hpp"

#include <algorithm>

namespace causal_loom {

StructuralSystem make_system(std::vector<Equation> equations, AttributeMap attributes,
                             bool allow_empty) {
    if (equations.empty() && !allow_empty) throw ModelError("empty system: no equations");
    std::sort(equations.begin(), equations.end(),
              [](const Equation& a, const Equation& b) { return a.id() < b.id(); });
    for (std::size_t i = 1; i < equations.size(); ++i) {
        if (equations[i - 1].id() == equations[i].id())
            throw ModelError("duplicate equation id " + equations[i].id().str());
    }

    AttributeMap variables;
    for (const auto& eq : equations) {
        if (eq.participants().empty())
            throw ModelError("equation " + eq.id().str() + " has no participants");
        for (const auto& v : eq.participants()) variables.try_emplace(v);
    }
    for (auto& [name, attrs] : attributes) {
        auto it = variables.find(name);
        if (it == variables.end())
            throw ModelError("variable " + name.str() + " participates in no equation");
        attrs.validate();
        it->second = std::move(attrs);
    }

    StructuralSystem system;
    system.equations_ = std::move(equations);
    system.variables_ = std::move(variables);
    return system;
}

StructuralSystem build_system(std::vector<Equation> equations, AttributeMap attributes) {
    return make_system(std::move(equations), std::move(attributes), false);
}

bool StructuralSystem::has_equation(const EquationId& id) const {
    return std::any_of(equations_.begin(), equations_.end(),
                       [&](const Equation& e) { return e.id() == id; });
}

const Equation& StructuralSystem::equation(const EquationId& id) const {
    auto it = std::lower_bound(equations_.begin(), equations_.end(), id,
                               [](const Equation& e, const EquationId& key) { return e.id() < key; });
    if (it == equations_.end() || it->id() != id)
        throw UnknownReferenceError("unknown equation " + id.str());
    return *it;
}

const VariableAttributes& StructuralSystem::attributes(const VariableId& v) const {
    auto it = variables_.find(v);
    if (it == variables_.end()) throw UnknownReferenceError("unknown variable " + v.str());
    return it->second;
}

SubsetCounts subset_counts(const StructuralSystem& system, const std::set<EquationId>& ids) {
    std::set<VariableId> vars;
    for (const auto& id : ids) {
        const auto& eq = system.equation(id);
        vars.insert(eq.participants().begin(), eq.participants().end());
    }
    return {ids.size(), vars.size()};
}

namespace {

void require_variable(const StructuralSystem& system, const VariableId& v) {
    if (!system.has_variable(v)) throw UnknownReferenceError("unknown variable " + v.str());
}

StructuralSystem replace_variable(const StructuralSystem& system, const VariableId& from,
                                  const VariableId& to, const VariableAttributes& kept) {
    std::vector<Equation> equations;
    equations.reserve(system.equation_count());
    for (const auto& eq : system.equations()) {
        equations.push_back(eq.involves(from) ? eq.with_variable_replaced(from, to) : eq);
    }
    AttributeMap attributes;
    for (const auto& [name, attrs] : system.variables()) {
        if (name == from) continue;
        attributes.emplace(name, attrs);
    }
    attributes.insert_or_assign(to, kept);
    return make_system(std::move(equations), std::move(attributes), true);
}

} // namespace

StructuralSystem rename_variable(const StructuralSystem& system, const VariableId& old_name,
                                 const VariableId& new_name) {
    require_variable(system, old_name);
    if (system.has_variable(new_name))
        throw ModelError("cannot rename " + old_name.str() + ": " + new_name.str() +
                         " already exists");
    return replace_variable(system, old_name, new_name, system.attributes(old_name));
}

StructuralSystem merge_variables(const StructuralSystem& system, const VariableId& source,
                                 const VariableId& target) {
    require_variable(system, source);
    require_variable(system, target);
    if (source == target) throw ModelError("cannot merge " + source.str() + " with itself");
    return replace_variable(system, source, target, system.attributes(target));
}

StructuralSystem add_equation(const StructuralSystem& system, Equation equation,
                              const AttributeMap& attributes) {
    auto equations = system.equations();
    AttributeMap merged = system.variables();
    for (const auto& v : equation.participants()) {
        if (merged.contains(v)) continue;
        auto it = attributes.find(v);
        merged.emplace(v, it != attributes.end() ? it->second : VariableAttributes{});
    }
    equations.push_back(std::move(equation));
    return make_system(std::move(equations), std::move(merged), false);
}

StructuralSystem remove_equation(const StructuralSystem& system, const EquationId& id) {
    if (!system.has_equation(id)) throw UnknownReferenceError("unknown equation " + id.str());
    std::vector<Equation> equations;
    for (const auto& eq : system.equations()) {
        if (eq.id() != id) equations.push_back(eq);
    }
    AttributeMap attributes;
    for (const auto& [name, attrs] : system.variables()) {
        bool used = std::any_of(equations.begin(), equations.end(),
                                [&](const Equation& e) { return e.involves(name); });
        if (used) attributes.emplace(name, attrs);
    }
    return make_system(std::move(equations), std::move(attributes), true);
}

StructuralSystem with_attributes(const StructuralSystem& system, const VariableId& v,
                                 VariableAttributes attributes) {
    require_variable(system, v);
    auto all = system.variables();
    all[v] = std::move(attributes);
    return make_system(system.equations(), std::move(all), true);
}

std::string unused_name(const std::string& base,
                        const std::function<bool(const std::string&)>& taken) {
    for (std::size_t suffix = 0;; ++suffix) {
        auto candidate = base + std::to_string(suffix);
        if (!taken(candidate)) return candidate;
    }
}

bool StructureMatrix::marked(std::size_t row, std::size_t column) const {
    const auto& r = entries.at(row);
    return std::binary_search(r.begin(), r.end(), column);
}

StructureMatrix structure_matrix(const StructuralSystem& system) {
    StructureMatrix matrix;
    std::map<VariableId, std::size_t> column_of;
    for (const auto& [name, attrs] : system.variables()) {
        column_of.emplace(name, matrix.columns.size());
        matrix.columns.push_back(name);
    }
    for (const auto& eq : system.equations()) {
        matrix.rows.push_back(eq.id());
        std::vector<std::size_t> row;
        for (const auto& v : eq.participants()) row.push_back(column_of.at(v));
        std::sort(row.begin(), row.end());
        matrix.entries.push_back(std::move(row));
    }
    return matrix;
}

} // namespace causal_loom
