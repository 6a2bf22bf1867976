#pragma once

#include "causal_loom/knowledge_base.hpp"
#include "causal_loom/ordering.hpp"
#include "causal_loom/structural_system.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace causal_loom {

/// Which knowledge-base mechanism each equation was copied from; nullopt for
/// equations authored in the workspace. Every equation has an entry.
using Provenance = std::map<EquationId, std::optional<KbPath>>;

/// An action that would over-constrain the model, held until the user
/// releases an equation or cancels.
struct PendingOverConstraint {
    std::string action;
    StructuralSystem proposed;
    Provenance proposed_provenance;
    std::vector<ReleaseCandidate> candidates;
    /// Single-variable equations fixing a truly-exogenous variable; never
    /// releasable.
    std::set<EquationId> locked;

    friend bool operator==(const PendingOverConstraint&, const PendingOverConstraint&) = default;
};

struct ActionResult {
    enum class Status { applied, needs_release, rejected };

    Status status = Status::applied;
    std::optional<OrderingResult> ordering;   ///< applied
    std::vector<ReleaseCandidate> candidates; ///< needs_release
    std::string reason;                       ///< rejected
    std::vector<std::string> warnings;

    friend bool operator==(const ActionResult&, const ActionResult&) = default;
};

std::string_view to_string(ActionResult::Status status) noexcept;

/// A live model-building session.
///
/// The committed system is never over-constrained: an action that would make
/// it so is held in pending() and nothing else is accepted until
/// release_equation() or cancel_pending(). ordering() always equals
/// causal_ordering(system()).
///
/// Unknown names raise UnknownReferenceError; actions attempted in the wrong
/// pending state raise PendingStateError. Domain refusals come back as
/// ActionResult::Status::rejected.
class Workspace {
public:
    Workspace();

    /// Throws OverConstrainedError.
    explicit Workspace(StructuralSystem system, Provenance provenance = {});

    const StructuralSystem& system() const noexcept { return system_; }
    const Provenance& provenance() const noexcept { return provenance_; }
    const OrderingResult& ordering() const noexcept { return ordering_; }
    const std::optional<PendingOverConstraint>& pending() const noexcept { return pending_; }

    /// Copies a mechanism in. Variables whose names are already in use get
    /// the smallest free decimal suffix (NS -> NS0); the equation keeps the
    /// mechanism's name when it is a free identifier.
    ActionResult add_mechanism(const KnowledgeBase& kb, const KbPath& path);

    ActionResult merge_variables(const VariableId& source, const VariableId& target);

    /// Adds `variable = value`. The new equation is named `id`, or f<N+1>
    /// where N is the largest number among existing f<N> ids.
    ActionResult set_exogenous(const VariableId& variable, double value,
                               std::optional<EquationId> id = std::nullopt);

    ActionResult release_equation(const EquationId& id);
    ActionResult cancel_pending();

    /// Copies every equation whose participants all lie in `variables` into
    /// `destination` as a mechanism named after the equation id.
    KnowledgeBase extract(const std::set<VariableId>& variables, const KnowledgeBase& kb,
                          const KbPath& destination) const;

    friend bool operator==(const Workspace&, const Workspace&) = default;

private:
    ActionResult commit_or_hold(StructuralSystem proposed, Provenance provenance,
                                std::string action, std::vector<std::string> warnings);
    void commit(StructuralSystem system, Provenance provenance);
    void require_idle(std::string_view action) const;
    EquationId next_assignment_id() const;

    StructuralSystem system_;
    Provenance provenance_;
    OrderingResult ordering_;
    std::optional<PendingOverConstraint> pending_;
};

/// `.sem` text of the committed state followed by `#%` provenance lines, so a
/// snapshot is itself a loadable model. Pending state is not recorded.
std::string snapshot_workspace(const Workspace& workspace);

/// Throws ParseError, KbError or OverConstrainedError.
Workspace restore_workspace(std::string_view snapshot);

} // namespace causal_loom
