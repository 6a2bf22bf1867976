#include "causal_loom/knowledge_base.hpp"

#include "causal_loom/error.hpp"
#include "causal_loom/sem_format.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace causal_loom {

namespace {

constexpr const char* kFormatTag = "causal-loom-kb";
constexpr int kFormatVersion = 1;

void validate_segment(const std::string& name) {
    if (name.empty()) throw KbError("empty name in knowledge-base path");
    if (name.find('/') != std::string::npos)
        throw KbError("name '" + name + "' contains a path separator");
}

const EquationId& template_id() {
    static const EquationId id("mechanism");
    return id;
}

template <typename T>
auto find_named(std::vector<T>& items, const std::string& name) {
    return std::lower_bound(items.begin(), items.end(), name,
                            [](const T& item, const std::string& key) { return item.name < key; });
}

template <typename T>
auto find_named(const std::vector<T>& items, const std::string& name) {
    return std::lower_bound(items.begin(), items.end(), name,
                            [](const T& item, const std::string& key) { return item.name < key; });
}

auto find_mechanism(const std::vector<Mechanism>& items, const std::string& name) {
    return std::lower_bound(
        items.begin(), items.end(), name,
        [](const Mechanism& item, const std::string& key) { return item.name() < key; });
}

bool folder_has(const KbFolder& folder, const std::string& name) {
    auto f = find_named(folder.folders, name);
    if (f != folder.folders.end() && f->name == name) return true;
    auto m = find_mechanism(folder.mechanisms, name);
    return m != folder.mechanisms.end() && m->name() == name;
}

const KbFolder* find_folder(const KbFolder& root, const KbPath& path) {
    const KbFolder* current = &root;
    for (const auto& segment : path.segments()) {
        auto it = find_named(current->folders, segment);
        if (it == current->folders.end() || it->name != segment) return nullptr;
        current = &*it;
    }
    return current;
}

void canonicalize(KbFolder& folder, bool is_root) {
    if (!is_root) validate_segment(folder.name);
    for (auto& sub : folder.folders) canonicalize(sub, false);
    std::sort(folder.folders.begin(), folder.folders.end(),
              [](const KbFolder& a, const KbFolder& b) { return a.name < b.name; });
    std::sort(folder.mechanisms.begin(), folder.mechanisms.end(),
              [](const Mechanism& a, const Mechanism& b) { return a.name() < b.name(); });
    std::vector<std::string> names;
    for (const auto& sub : folder.folders) names.push_back(sub.name);
    for (const auto& m : folder.mechanisms) names.push_back(m.name());
    std::sort(names.begin(), names.end());
    if (auto dup = std::adjacent_find(names.begin(), names.end()); dup != names.end())
        throw KbError("duplicate name '" + *dup + "' in folder '" + folder.name + "'");
}

void collect_matches(const KbFolder& folder, const KbPath& here, std::string_view variable,
                     std::vector<KbPath>& out) {
    for (const auto& m : folder.mechanisms) {
        bool hit = std::any_of(m.participants().begin(), m.participants().end(),
                               [&](const VariableId& v) { return v.str() == variable; });
        if (hit) out.push_back(here.child(m.name()));
    }
    for (const auto& sub : folder.folders) collect_matches(sub, here.child(sub.name), variable, out);
}

// --- JSON -----------------------------------------------------------------

using ordered_json = nlohmann::ordered_json;

void require_keys(const nlohmann::json& object, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    if (!object.is_object()) throw KbError(where + ": expected an object");
    for (const auto& [key, value] : object.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return key == k; });
        if (!known) throw KbError(where + ": unknown key '" + key + "'");
    }
}

std::string string_field(const nlohmann::json& object, const char* key, const std::string& where,
                         bool required) {
    auto it = object.find(key);
    if (it == object.end()) {
        if (required) throw KbError(where + ": missing '" + key + "'");
        return {};
    }
    if (!it->is_string()) throw KbError(where + ": '" + key + "' must be a string");
    return it->get<std::string>();
}

std::optional<double> cost_field(const nlohmann::json& object, const char* key,
                                 const std::string& where) {
    auto it = object.find(key);
    if (it == object.end()) return std::nullopt;
    if (!it->is_number()) throw KbError(where + ": '" + key + "' must be a number");
    return it->get<double>();
}

VariableAttributes attributes_from_json(const nlohmann::json& j, const std::string& where) {
    require_keys(j, {"manipulativity", "observability", "manipulation_cost", "observation_cost"},
                 where);
    VariableAttributes attrs;
    if (j.contains("manipulativity")) {
        auto text = string_field(j, "manipulativity", where, true);
        auto m = parse_manipulativity(text);
        if (!m) throw KbError(where + ": unknown manipulativity '" + text + "'");
        attrs.manipulativity = *m;
    }
    if (j.contains("observability")) {
        auto text = string_field(j, "observability", where, true);
        auto o = parse_observability(text);
        if (!o) throw KbError(where + ": unknown observability '" + text + "'");
        attrs.observability = *o;
    }
    attrs.manipulation_cost = cost_field(j, "manipulation_cost", where);
    attrs.observation_cost = cost_field(j, "observation_cost", where);
    try {
        attrs.validate();
    } catch (const ModelError& e) {
        throw KbError(where + ": " + e.what());
    }
    return attrs;
}

ordered_json attributes_to_json(const VariableAttributes& attrs) {
    ordered_json j;
    j["manipulativity"] = std::string(to_string(attrs.manipulativity));
    j["observability"] = std::string(to_string(attrs.observability));
    if (attrs.manipulation_cost) j["manipulation_cost"] = *attrs.manipulation_cost;
    if (attrs.observation_cost) j["observation_cost"] = *attrs.observation_cost;
    return j;
}

Mechanism mechanism_from_json(const nlohmann::json& j, const std::string& folder_where) {
    require_keys(j, {"name", "equation", "description", "attributes"}, folder_where + " mechanism");
    auto name = string_field(j, "name", folder_where + " mechanism", true);
    auto where = folder_where == "/" ? "/" + name : folder_where + "/" + name;
    auto equation_text = string_field(j, "equation", where, true);
    auto description = string_field(j, "description", where, false);

    Equation form = [&] {
        try {
            return parse_equation_body(template_id(), equation_text);
        } catch (const ParseError& e) {
            throw KbError(where + ": equation column " + std::to_string(e.column()) + ": " +
                          e.message());
        }
    }();

    AttributeMap attributes;
    if (auto it = j.find("attributes"); it != j.end()) {
        if (!it->is_object()) throw KbError(where + ": 'attributes' must be an object");
        for (const auto& [var, value] : it->items()) {
            if (!is_identifier(var)) throw KbError(where + ": invalid variable name '" + var + "'");
            attributes.emplace(VariableId(var), attributes_from_json(value, where + " " + var));
        }
    }
    try {
        return Mechanism(std::move(name), form, std::move(attributes), std::move(description));
    } catch (const Error& e) {
        throw KbError(where + ": " + e.what());
    }
}

ordered_json mechanism_to_json(const Mechanism& m) {
    ordered_json j;
    j["name"] = m.name();
    j["equation"] = m.equation_text();
    j["description"] = m.description();
    ordered_json attrs = ordered_json::object();
    for (const auto& [var, a] : m.attributes()) attrs[var.str()] = attributes_to_json(a);
    j["attributes"] = std::move(attrs);
    return j;
}

void fill_folder(KbFolder& folder, const nlohmann::json& j, const std::string& where) {
    if (auto it = j.find("folders"); it != j.end()) {
        if (!it->is_array()) throw KbError(where + ": 'folders' must be an array");
        for (const auto& sub : *it) {
            require_keys(sub, {"name", "folders", "mechanisms"}, where + " folder");
            KbFolder child;
            child.name = string_field(sub, "name", where + " folder", true);
            try {
                validate_segment(child.name);
            } catch (const KbError& e) {
                throw KbError(where + ": " + e.what());
            }
            fill_folder(child, sub, where == "/" ? "/" + child.name : where + "/" + child.name);
            if (folder_has(folder, child.name))
                throw KbError(where + ": duplicate name '" + child.name + "'");
            folder.folders.insert(find_named(folder.folders, child.name), std::move(child));
        }
    }
    if (auto it = j.find("mechanisms"); it != j.end()) {
        if (!it->is_array()) throw KbError(where + ": 'mechanisms' must be an array");
        for (const auto& mj : *it) {
            auto m = mechanism_from_json(mj, where);
            if (folder_has(folder, m.name()))
                throw KbError(where + ": duplicate name '" + m.name() + "'");
            auto pos = find_mechanism(folder.mechanisms, m.name());
            folder.mechanisms.insert(pos, std::move(m));
        }
    }
}

ordered_json folder_to_json(const KbFolder& folder, bool is_root) {
    ordered_json j;
    if (is_root) {
        j["format"] = kFormatTag;
        j["version"] = kFormatVersion;
    } else {
        j["name"] = folder.name;
    }
    ordered_json folders = ordered_json::array();
    for (const auto& sub : folder.folders) folders.push_back(folder_to_json(sub, false));
    ordered_json mechanisms = ordered_json::array();
    for (const auto& m : folder.mechanisms) mechanisms.push_back(mechanism_to_json(m));
    j["folders"] = std::move(folders);
    j["mechanisms"] = std::move(mechanisms);
    return j;
}

} // namespace

// --- KbPath ---------------------------------------------------------------

KbPath::KbPath(std::vector<std::string> segments) : segments_(std::move(segments)) {
    for (const auto& s : segments_) validate_segment(s);
}

KbPath KbPath::parse(std::string_view text) {
    if (text.empty() || text.front() != '/')
        throw KbError("knowledge-base path must start with '/': '" + std::string(text) + "'");
    std::vector<std::string> segments;
    std::size_t start = 1;
    while (start < text.size()) {
        auto end = text.find('/', start);
        if (end == std::string_view::npos) end = text.size();
        if (end == start) throw KbError("empty segment in path '" + std::string(text) + "'");
        segments.emplace_back(text.substr(start, end - start));
        start = end + 1;
        if (end + 1 == text.size()) break; // trailing slash
    }
    return KbPath(std::move(segments));
}

const std::string& KbPath::leaf() const {
    if (segments_.empty()) throw KbError("the root path has no leaf");
    return segments_.back();
}

KbPath KbPath::parent() const {
    if (segments_.empty()) throw KbError("the root path has no parent");
    return KbPath(std::vector<std::string>(segments_.begin(), segments_.end() - 1));
}

KbPath KbPath::child(std::string name) const {
    auto segments = segments_;
    segments.push_back(std::move(name));
    return KbPath(std::move(segments));
}

std::string KbPath::str() const {
    if (segments_.empty()) return "/";
    std::string out;
    for (const auto& s : segments_) out += "/" + s;
    return out;
}

// --- Mechanism ------------------------------------------------------------

Mechanism::Mechanism(std::string name, const Equation& form, AttributeMap attributes,
                     std::string description)
    : name_(std::move(name)), form_(form.with_id(template_id())),
      attributes_(std::move(attributes)), description_(std::move(description)) {
    validate_segment(name_);
    for (const auto& [var, attrs] : attributes_) {
        if (!form_.involves(var))
            throw KbError("mechanism " + name_ + " has attributes for non-participant " + var.str());
        attrs.validate();
    }
}

std::string Mechanism::equation_text() const { return format_equation_body(form_); }

// --- KnowledgeBase --------------------------------------------------------

KnowledgeBase::KnowledgeBase(KbFolder root) : root_(std::move(root)) { canonicalize(root_, true); }

KbListing KnowledgeBase::list(const KbPath& folder) const {
    const auto* f = find_folder(root_, folder);
    if (!f) throw UnknownReferenceError("unknown folder " + folder.str());
    KbListing listing;
    for (const auto& sub : f->folders) listing.folders.push_back(sub.name);
    for (const auto& m : f->mechanisms) listing.mechanisms.push_back(m.name());
    return listing;
}

const Mechanism& KnowledgeBase::mechanism(const KbPath& path) const {
    if (path.is_root()) throw UnknownReferenceError("the root is not a mechanism");
    const auto* f = find_folder(root_, path.parent());
    if (f) {
        auto it = find_mechanism(f->mechanisms, path.leaf());
        if (it != f->mechanisms.end() && it->name() == path.leaf()) return *it;
    }
    throw UnknownReferenceError("unknown mechanism " + path.str());
}

std::vector<KbPath> KnowledgeBase::search_by_variable(std::string_view variable) const {
    std::vector<KbPath> out;
    collect_matches(root_, KbPath{}, variable, out);
    std::sort(out.begin(), out.end());
    return out;
}

KnowledgeBase KnowledgeBase::put(const KbPath& folder, Mechanism mechanism) const {
    KbFolder root = root_;
    KbFolder* current = &root;
    for (const auto& segment : folder.segments()) {
        auto it = find_named(current->folders, segment);
        if (it == current->folders.end() || it->name != segment) {
            if (folder_has(*current, segment))
                throw KbError("cannot create folder '" + segment + "': a mechanism has that name");
            it = current->folders.insert(it, KbFolder{segment, {}, {}});
        }
        current = &*it;
    }
    if (folder_has(*current, mechanism.name()))
        throw KbError("name collision: " + folder.child(mechanism.name()).str() + " already exists");
    auto pos = find_mechanism(current->mechanisms, mechanism.name());
    current->mechanisms.insert(pos, std::move(mechanism));
    return KnowledgeBase(std::move(root));
}

KnowledgeBase kb_load(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw KbError(std::string("malformed knowledge-base document: ") + e.what());
    }
    require_keys(doc, {"format", "version", "folders", "mechanisms"}, "/");
    if (string_field(doc, "format", "/", true) != kFormatTag)
        throw KbError(std::string("not a knowledge-base document (format must be '") + kFormatTag + "')");
    auto version = doc.find("version");
    if (version == doc.end() || !version->is_number_integer() || version->get<int>() != kFormatVersion)
        throw KbError("unsupported knowledge-base version");
    KbFolder root;
    fill_folder(root, doc, "/");
    return KnowledgeBase(std::move(root));
}

std::string kb_save(const KnowledgeBase& kb) { return folder_to_json(kb.root(), true).dump(2) + "\n"; }

KnowledgeBase kb_load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw KbError("cannot open knowledge base " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return kb_load(buffer.str());
}

void kb_save_file(const KnowledgeBase& kb, const std::string& path) {
    auto temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw KbError("cannot write " + temp);
        out << kb_save(kb);
        if (!out) throw KbError("cannot write " + temp);
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) throw KbError("cannot replace " + path + ": " + ec.message());
}

} // namespace causal_loom
