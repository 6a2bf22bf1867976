#pragma once

#include "causal_loom/attributes.hpp"
#include "causal_loom/equation.hpp"
#include "causal_loom/identifiers.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace causal_loom {

using AttributeMap = std::map<VariableId, VariableAttributes>;

/// A set of equations over named variables.
///
/// Immutable; mutation functions return new systems. Equations are kept in
/// canonical id order and variables are kept sorted by name, so every output
/// derived from a system is reproducible. Every variable participates in at
/// least one equation.
///
/// A default-constructed system is empty. build_system() never produces one,
/// but an interactive session may start from (or return to) emptiness.
class StructuralSystem {
public:
    StructuralSystem() = default;

    const std::vector<Equation>& equations() const noexcept { return equations_; }
    const AttributeMap& variables() const noexcept { return variables_; }

    std::size_t equation_count() const noexcept { return equations_.size(); }
    std::size_t variable_count() const noexcept { return variables_.size(); }
    bool empty() const noexcept { return equations_.empty(); }

    bool has_equation(const EquationId& id) const;
    bool has_variable(const VariableId& v) const { return variables_.contains(v); }

    /// Throws UnknownReferenceError.
    const Equation& equation(const EquationId& id) const;
    const VariableAttributes& attributes(const VariableId& v) const;

    friend bool operator==(const StructuralSystem&, const StructuralSystem&) = default;

private:
    friend StructuralSystem make_system(std::vector<Equation>, AttributeMap, bool);

    std::vector<Equation> equations_;
    AttributeMap variables_;
};

/// Validates and assembles a system. Variables missing from `attributes` get
/// the defaults (manipulatable, observable). Throws ModelError on an empty
/// equation list, duplicate equation ids, invalid attributes, or an attribute
/// entry for a variable that participates in no equation.
StructuralSystem build_system(std::vector<Equation> equations, AttributeMap attributes = {});

/// Same as build_system() but accepts an empty equation list.
StructuralSystem make_system(std::vector<Equation> equations, AttributeMap attributes,
                             bool allow_empty);

struct SubsetCounts {
    std::size_t ne = 0; ///< equations in the subset
    std::size_t nv = 0; ///< distinct variables appearing in the subset

    friend bool operator==(const SubsetCounts&, const SubsetCounts&) = default;
};

SubsetCounts subset_counts(const StructuralSystem& system, const std::set<EquationId>& ids);

StructuralSystem rename_variable(const StructuralSystem& system, const VariableId& old_name,
                                 const VariableId& new_name);

/// Replaces every occurrence of `source` with `target`; target's attributes
/// win. The result may be over-constrained.
StructuralSystem merge_variables(const StructuralSystem& system, const VariableId& source,
                                 const VariableId& target);

/// Adds an equation. Variables new to the system take their attributes from
/// `attributes` when listed there, the defaults otherwise; existing variables
/// keep theirs.
StructuralSystem add_equation(const StructuralSystem& system, Equation equation,
                              const AttributeMap& attributes = {});

/// Removes an equation and any variable left without equations.
StructuralSystem remove_equation(const StructuralSystem& system, const EquationId& id);

StructuralSystem with_attributes(const StructuralSystem& system, const VariableId& v,
                                 VariableAttributes attributes);

/// `base` followed by the smallest decimal suffix (0, 1, ...) rejected by
/// `taken`: NS -> NS0, NS1, ...
std::string unused_name(const std::string& base,
                        const std::function<bool(const std::string&)>& taken);

/// The qualitative m x n incidence view of a system.
struct StructureMatrix {
    std::vector<EquationId> rows;
    std::vector<VariableId> columns;
    std::vector<std::vector<std::size_t>> entries; ///< sorted column indices per row

    bool marked(std::size_t row, std::size_t column) const;
};

StructureMatrix structure_matrix(const StructuralSystem& system);

} // namespace causal_loom
