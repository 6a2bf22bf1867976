#include "causal_loom/workspace.hpp"

#include "causal_loom/error.hpp"
#include "causal_loom/sem_format.hpp"

#include <algorithm>
#include <charconv>

namespace causal_loom {

std::string_view to_string(ActionResult::Status status) noexcept {
    switch (status) {
    case ActionResult::Status::applied: return "applied";
    case ActionResult::Status::needs_release: return "needs-release";
    case ActionResult::Status::rejected: return "rejected";
    }
    return "applied";
}

namespace {

ActionResult rejected(std::string reason) {
    ActionResult r;
    r.status = ActionResult::Status::rejected;
    r.reason = std::move(reason);
    return r;
}

std::string describe(const VariableAttributes& a) {
    return std::string(to_string(a.manipulativity)) + "/" + std::string(to_string(a.observability));
}

std::set<EquationId> locked_equations(const StructuralSystem& system) {
    std::set<EquationId> out;
    for (const auto& eq : system.equations()) {
        if (eq.participants().size() != 1) continue;
        if (system.attributes(eq.participants().front()).manipulativity ==
            Manipulativity::truly_exogenous)
            out.insert(eq.id());
    }
    return out;
}

void require_variable(const StructuralSystem& system, const VariableId& v) {
    if (!system.has_variable(v)) throw UnknownReferenceError("unknown variable " + v.str());
}

} // namespace

Workspace::Workspace() : ordering_(causal_ordering(system_)) {}

Workspace::Workspace(StructuralSystem system, Provenance provenance) {
    for (const auto& [id, path] : provenance) {
        if (!system.has_equation(id))
            throw UnknownReferenceError("provenance for unknown equation " + id.str());
    }
    for (const auto& eq : system.equations()) provenance.try_emplace(eq.id());
    commit(std::move(system), std::move(provenance));
}

void Workspace::commit(StructuralSystem system, Provenance provenance) {
    ordering_ = causal_ordering(system);
    system_ = std::move(system);
    provenance_ = std::move(provenance);
    pending_.reset();
}

void Workspace::require_idle(std::string_view action) const {
    if (pending_)
        throw PendingStateError(std::string(action) +
                                " not allowed while an over-constraint is pending (" +
                                pending_->action + "); release an equation or cancel");
}

ActionResult Workspace::commit_or_hold(StructuralSystem proposed, Provenance provenance,
                                       std::string action, std::vector<std::string> warnings) {
    ActionResult result;
    result.warnings = std::move(warnings);
    if (classify(proposed) == SystemClass::over_constrained) {
        PendingOverConstraint pending;
        pending.action = std::move(action);
        pending.candidates = release_candidates(proposed);
        pending.locked = locked_equations(proposed);
        pending.proposed = std::move(proposed);
        pending.proposed_provenance = std::move(provenance);
        result.status = ActionResult::Status::needs_release;
        result.candidates = pending.candidates;
        pending_ = std::move(pending);
        return result;
    }
    commit(std::move(proposed), std::move(provenance));
    result.ordering = ordering_;
    return result;
}

EquationId Workspace::next_assignment_id() const {
    std::size_t highest = 0;
    for (const auto& eq : system_.equations()) {
        const auto& name = eq.id().str();
        if (name.size() < 2 || name[0] != 'f') continue;
        std::size_t n = 0;
        auto [end, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), n);
        if (ec == std::errc{} && end == name.data() + name.size()) highest = std::max(highest, n);
    }
    for (auto n = highest + 1;; ++n) {
        EquationId id("f" + std::to_string(n));
        if (!system_.has_equation(id)) return id;
    }
}

ActionResult Workspace::add_mechanism(const KnowledgeBase& kb, const KbPath& path) {
    require_idle("add-mechanism");
    const auto& mechanism = kb.mechanism(path);

    std::set<std::string> incoming;
    for (const auto& v : mechanism.participants()) incoming.insert(v.str());

    std::vector<std::string> warnings;
    std::map<VariableId, VariableId> renames;
    std::set<std::string> chosen;
    for (const auto& v : mechanism.participants()) {
        if (!system_.has_variable(v)) continue;
        auto fresh = unused_name(v.str(), [&](const std::string& name) {
            return system_.has_variable(VariableId(name)) || incoming.contains(name) ||
                   chosen.contains(name);
        });
        chosen.insert(fresh);
        renames.emplace(v, VariableId(fresh));
        warnings.push_back("renamed " + v.str() + " to " + fresh);
    }

    std::string base = is_identifier(mechanism.name()) ? mechanism.name() : "f";
    std::string id_text = base;
    for (std::size_t k = 1; system_.has_equation(EquationId(id_text)); ++k)
        id_text = base + "_" + std::to_string(k);
    EquationId id(id_text);

    auto equation = mechanism.instantiate(id);
    AttributeMap attributes;
    for (const auto& [from, to] : renames) equation = equation.with_variable_replaced(from, to);
    for (const auto& [var, attrs] : mechanism.attributes()) {
        auto it = renames.find(var);
        attributes.emplace(it == renames.end() ? var : it->second, attrs);
    }

    auto proposed = add_equation(system_, std::move(equation), attributes);
    auto provenance = provenance_;
    provenance[id] = path;
    return commit_or_hold(std::move(proposed), std::move(provenance),
                          "add-mechanism " + path.str(), std::move(warnings));
}

ActionResult Workspace::merge_variables(const VariableId& source, const VariableId& target) {
    require_idle("merge");
    require_variable(system_, source);
    require_variable(system_, target);
    if (source == target) throw ModelError("cannot merge " + source.str() + " with itself");

    std::vector<std::string> warnings;
    const auto& kept = system_.attributes(target);
    const auto& dropped = system_.attributes(source);
    if (kept != dropped) {
        warnings.push_back("attributes of " + source.str() + " (" + describe(dropped) +
                           ") discarded in favour of " + target.str() + " (" + describe(kept) + ")");
    }
    return commit_or_hold(causal_loom::merge_variables(system_, source, target), provenance_,
                          "merge " + source.str() + " into " + target.str(), std::move(warnings));
}

ActionResult Workspace::set_exogenous(const VariableId& variable, double value,
                                      std::optional<EquationId> id) {
    require_idle("set-exogenous");
    require_variable(system_, variable);
    if (system_.attributes(variable).manipulativity == Manipulativity::truly_endogenous)
        return rejected(variable.str() + " is truly endogenous and cannot be set exogenously");

    auto equation_id = id ? *id : next_assignment_id();
    if (system_.has_equation(equation_id))
        throw ModelError("equation id " + equation_id.str() + " is already in use");

    auto proposed =
        add_equation(system_, Equation::value_assignment(equation_id, variable, value));
    auto provenance = provenance_;
    provenance[equation_id] = std::nullopt;
    return commit_or_hold(std::move(proposed), std::move(provenance),
                          "set-exogenous " + variable.str() + " = " + format_number(value), {});
}

ActionResult Workspace::release_equation(const EquationId& id) {
    if (!pending_) throw PendingStateError("no pending over-constraint to resolve");
    auto candidate = std::find_if(pending_->candidates.begin(), pending_->candidates.end(),
                                  [&](const ReleaseCandidate& c) { return c.equation == id; });
    if (candidate == pending_->candidates.end())
        throw UnknownReferenceError("unknown equation " + id.str());
    if (pending_->locked.contains(id))
        return rejected(id.str() + " assigns a truly-exogenous variable and cannot be released");
    if (!candidate->valid)
        return rejected("releasing " + id.str() + " leaves the model over-constrained");

    auto system = remove_equation(pending_->proposed, id);
    auto provenance = pending_->proposed_provenance;
    provenance.erase(id);
    commit(std::move(system), std::move(provenance));
    ActionResult result;
    result.ordering = ordering_;
    return result;
}

ActionResult Workspace::cancel_pending() {
    if (!pending_) throw PendingStateError("nothing to cancel");
    pending_.reset();
    ActionResult result;
    result.ordering = ordering_;
    return result;
}

KnowledgeBase Workspace::extract(const std::set<VariableId>& variables, const KnowledgeBase& kb,
                                 const KbPath& destination) const {
    require_idle("extract");
    for (const auto& v : variables) require_variable(system_, v);

    KnowledgeBase out = kb;
    bool any = false;
    for (const auto& eq : system_.equations()) {
        bool contained = std::all_of(eq.participants().begin(), eq.participants().end(),
                                     [&](const VariableId& v) { return variables.contains(v); });
        if (!contained) continue;
        AttributeMap attributes;
        for (const auto& v : eq.participants()) attributes.emplace(v, system_.attributes(v));
        out = out.put(destination, Mechanism(eq.id().str(), eq, std::move(attributes)));
        any = true;
    }
    if (!any) throw ModelError("no equation lies entirely within the selected variables");
    return out;
}

} // namespace causal_loom
