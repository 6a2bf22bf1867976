#pragma once

#include "causal_loom/error.hpp"
#include "causal_loom/structural_system.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

namespace causal_loom {

enum class SystemClass { self_contained, under_constrained, over_constrained };

std::string_view to_string(SystemClass c) noexcept;

/// A minimal self-contained subset identified at iteration `order`.
/// Equations and variables are sorted; both lists have equal length.
struct CompleteSubset {
    std::size_t order = 0;
    std::vector<EquationId> equations;
    std::vector<VariableId> variables;

    bool strongly_coupled() const noexcept { return equations.size() > 1; }

    friend bool operator==(const CompleteSubset&, const CompleteSubset&) = default;
};

enum class ArcKind { directed, bidirected, undirected };

std::string_view to_string(ArcKind k) noexcept;

struct Arc {
    VariableId tail;
    VariableId head;
    ArcKind kind;

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// nullopt marks a variable left in the strictly under-constrained residual.
using SolveOrder = std::optional<std::size_t>;

/// One node per variable; directed, bi-directed and undirected arcs.
class CausalGraph {
public:
    /// Throws ModelError if the node already exists with a different order.
    void add_node(const VariableId& v, SolveOrder order);

    /// Rejects self-loops and unknown endpoints. Bi-directed and undirected
    /// arcs are stored once with tail < head. Duplicates are ignored.
    void add_arc(const VariableId& tail, const VariableId& head, ArcKind kind);

    const std::map<VariableId, SolveOrder>& nodes() const noexcept { return nodes_; }
    const std::set<Arc>& arcs() const noexcept { return arcs_; }

    /// Tails of directed arcs into `v`, sorted.
    std::vector<VariableId> parents(const VariableId& v) const;

    friend bool operator==(const CausalGraph&, const CausalGraph&) = default;

private:
    std::map<VariableId, SolveOrder> nodes_;
    std::set<Arc> arcs_;
};

struct OrderingResult {
    CausalGraph graph;
    std::vector<CompleteSubset> complete_subsets; ///< by order, then first equation
    std::vector<EquationId> residual;             ///< derived strictly under-constrained subset
    SystemClass system_class = SystemClass::self_contained;

    friend bool operator==(const OrderingResult&, const OrderingResult&) = default;
};

/// A set of equations touching fewer variables than there are equations.
struct OverConstraintWitness {
    std::vector<EquationId> equations;
    std::vector<VariableId> variables;

    friend bool operator==(const OverConstraintWitness&, const OverConstraintWitness&) = default;
};

class OverConstrainedError : public Error {
public:
    explicit OverConstrainedError(OverConstraintWitness witness);

    const OverConstraintWitness& witness() const noexcept { return witness_; }

private:
    OverConstraintWitness witness_;
};

SystemClass classify(const StructuralSystem& system);

/// nullopt unless the system is over-constrained. The witness is the
/// alternating-path closure of an unmatched equation under a maximum
/// matching, so it has exactly one more equation than variables.
std::optional<OverConstraintWitness> over_constraint_witness(const StructuralSystem& system);

/// All minimal self-contained subsets (order 0). Throws OverConstrainedError.
std::vector<CompleteSubset> minimal_self_contained_subsets(const StructuralSystem& system);

/// Called with each derived system D^i before it is searched, starting with
/// the input itself (order 0), and last with the residual when one remains.
/// Derived equations are participation-only.
using DerivedSystemObserver =
    std::function<void(std::size_t order, const StructuralSystem& derived)>;

/// Extended causal ordering. Throws OverConstrainedError.
OrderingResult causal_ordering(const StructuralSystem& system,
                               const DerivedSystemObserver& observer = {});

struct ReleaseCandidate {
    EquationId equation;
    bool valid = false; ///< removing it leaves a non-over-constrained system

    friend bool operator==(const ReleaseCandidate&, const ReleaseCandidate&) = default;
};

/// Every equation of an over-constrained system with its validity. Throws
/// ModelError when the system is not over-constrained.
std::vector<ReleaseCandidate> release_candidates(const StructuralSystem& system);

} // namespace causal_loom
