#include "causal_loom/graph_document.hpp"

namespace causal_loom {

namespace {

template <class Ids>
Json names(const Ids& ids) {
    Json out = Json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

Json folder_json(const KbFolder& folder) {
    Json out = Json::object();
    out["name"] = folder.name;
    out["folders"] = Json::array();
    for (const auto& sub : folder.folders) out["folders"].push_back(folder_json(sub));
    out["mechanisms"] = Json::array();
    for (const auto& m : folder.mechanisms) out["mechanisms"].push_back(mechanism_json(m));
    return out;
}

} // namespace

Json attributes_json(const VariableAttributes& attributes) {
    Json out = Json::object();
    out["manipulativity"] = std::string(to_string(attributes.manipulativity));
    out["observability"] = std::string(to_string(attributes.observability));
    if (attributes.manipulation_cost) out["manipulation_cost"] = *attributes.manipulation_cost;
    if (attributes.observation_cost) out["observation_cost"] = *attributes.observation_cost;
    return out;
}

Json graph_document(const StructuralSystem& system, const OrderingResult& ordering) {
    Json doc = Json::object();
    doc["class"] = std::string(to_string(ordering.system_class));

    doc["nodes"] = Json::array();
    for (const auto& [var, order] : ordering.graph.nodes()) {
        Json node = Json::object();
        node["name"] = var.str();
        node["solve_order"] = order ? Json(*order) : Json(nullptr);
        node["attributes"] = attributes_json(system.attributes(var));
        doc["nodes"].push_back(std::move(node));
    }

    doc["arcs"] = Json::array();
    for (const auto& arc : ordering.graph.arcs()) {
        Json a = Json::object();
        a["tail"] = arc.tail.str();
        a["head"] = arc.head.str();
        a["kind"] = std::string(to_string(arc.kind));
        doc["arcs"].push_back(std::move(a));
    }

    doc["complete_subsets"] = Json::array();
    for (const auto& subset : ordering.complete_subsets) {
        Json s = Json::object();
        s["order"] = subset.order;
        s["equations"] = names(subset.equations);
        s["variables"] = names(subset.variables);
        doc["complete_subsets"].push_back(std::move(s));
    }

    doc["residual"] = names(ordering.residual);
    return doc;
}

std::string graph_dot(const StructuralSystem&, const OrderingResult& ordering) {
    std::string out = "digraph causal_model {\n";
    out += "  // " + std::string(to_string(ordering.system_class)) + "\n";
    for (const auto& [var, order] : ordering.graph.nodes()) {
        out += "  \"" + var.str() + "\" [solve_order=\"" +
               (order ? std::to_string(*order) : std::string("unresolved")) + "\"];\n";
    }
    for (const auto& arc : ordering.graph.arcs()) {
        out += "  \"" + arc.tail.str() + "\" -> \"" + arc.head.str() + "\"";
        switch (arc.kind) {
        case ArcKind::directed: break;
        case ArcKind::bidirected: out += " [dir=both]"; break;
        case ArcKind::undirected: out += " [dir=none]"; break;
        }
        out += ";\n";
    }
    out += "}\n";
    return out;
}

Json witness_json(const OverConstraintWitness& witness) {
    Json out = Json::object();
    out["class"] = std::string(to_string(SystemClass::over_constrained));
    out["witness"] = Json::object();
    out["witness"]["equations"] = names(witness.equations);
    out["witness"]["variables"] = names(witness.variables);
    return out;
}

Json values_json(const StructuralSystem& system, const ValueTable& values) {
    Json out = Json::object();
    out["values"] = Json::array();
    for (const auto& [var, attrs] : system.variables()) {
        Json v = Json::object();
        v["name"] = var.str();
        auto it = values.find(var);
        v["value"] = it == values.end() ? Json(nullptr) : Json(it->second);
        out["values"].push_back(std::move(v));
    }
    return out;
}

Json candidates_json(const PendingOverConstraint& pending) {
    Json out = Json::array();
    for (const auto& c : pending.candidates) {
        Json j = Json::object();
        j["equation"] = c.equation.str();
        j["valid"] = c.valid;
        j["locked"] = pending.locked.contains(c.equation);
        out.push_back(std::move(j));
    }
    return out;
}

Json mechanism_json(const Mechanism& mechanism) {
    Json out = Json::object();
    out["name"] = mechanism.name();
    out["equation"] = mechanism.equation_text();
    out["participants"] = names(mechanism.participants());
    out["description"] = mechanism.description();
    out["attributes"] = Json::object();
    for (const auto& [var, attrs] : mechanism.attributes())
        out["attributes"][var.str()] = attributes_json(attrs);
    return out;
}

Json kb_tree_json(const KnowledgeBase& kb) { return folder_json(kb.root()); }

Json kb_listing_json(const KbListing& listing) {
    Json out = Json::object();
    out["folders"] = listing.folders;
    out["mechanisms"] = listing.mechanisms;
    return out;
}

} // namespace causal_loom
