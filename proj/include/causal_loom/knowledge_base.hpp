#pragma once

#include "causal_loom/equation.hpp"
#include "causal_loom/structural_system.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal_loom {

/// Location in the knowledge-base tree, written "/university/teaching/f3".
/// The root is "/".
class KbPath {
public:
    KbPath() = default;
    explicit KbPath(std::vector<std::string> segments);

    /// Throws KbError on empty segments ("//") or a missing leading '/'.
    static KbPath parse(std::string_view text);

    const std::vector<std::string>& segments() const noexcept { return segments_; }
    bool is_root() const noexcept { return segments_.empty(); }
    const std::string& leaf() const;
    KbPath parent() const;
    KbPath child(std::string name) const;
    std::string str() const;

    friend bool operator==(const KbPath&, const KbPath&) = default;
    friend auto operator<=>(const KbPath&, const KbPath&) = default;

private:
    std::vector<std::string> segments_;
};

/// A reusable equation template. The participants and optional solved form
/// follow the same rules as Equation; attributes may only mention
/// participants.
class Mechanism {
public:
    Mechanism(std::string name, const Equation& form, AttributeMap attributes = {},
              std::string description = {});

    const std::string& name() const noexcept { return name_; }
    const std::vector<VariableId>& participants() const noexcept { return form_.participants(); }
    const std::optional<ExplicitForm>& explicit_form() const noexcept { return form_.explicit_form(); }
    const AttributeMap& attributes() const noexcept { return attributes_; }
    const std::string& description() const noexcept { return description_; }

    /// The `.sem` equation body, e.g. "SFR = NS / NF".
    std::string equation_text() const;

    /// A copy of the mechanism as an equation with the given id.
    Equation instantiate(const EquationId& id) const { return form_.with_id(id); }

    friend bool operator==(const Mechanism&, const Mechanism&) = default;

private:
    std::string name_;
    Equation form_;
    AttributeMap attributes_;
    std::string description_;
};

/// Sub-folders and mechanisms, each kept sorted by name. A name is unique
/// within a folder across both kinds.
struct KbFolder {
    std::string name;
    std::vector<KbFolder> folders;
    std::vector<Mechanism> mechanisms;

    friend bool operator==(const KbFolder&, const KbFolder&) = default;
};

struct KbListing {
    std::vector<std::string> folders;
    std::vector<std::string> mechanisms;

    friend bool operator==(const KbListing&, const KbListing&) = default;
};

/// Hierarchical store of mechanisms. Immutable; put() returns a new KB.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    /// Sorts every folder. Throws KbError on duplicate or invalid names.
    explicit KnowledgeBase(KbFolder root);

    const KbFolder& root() const noexcept { return root_; }

    /// Throws UnknownReferenceError if `folder` is not a folder.
    KbListing list(const KbPath& folder) const;
    const Mechanism& mechanism(const KbPath& path) const;

    /// Paths of every mechanism that has `variable` as a participant.
    std::vector<KbPath> search_by_variable(std::string_view variable) const;

    /// Stores `mechanism` in `folder`, creating missing folders. Throws
    /// KbError on a name collision.
    KnowledgeBase put(const KbPath& folder, Mechanism mechanism) const;

    friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;

private:
    KbFolder root_;
};

/// JSON document; see docs/kb-format.md. Throws KbError.
KnowledgeBase kb_load(std::string_view json_text);
std::string kb_save(const KnowledgeBase& kb);

KnowledgeBase kb_load_file(const std::string& path);
void kb_save_file(const KnowledgeBase& kb, const std::string& path);

} // namespace causal_loom
