#include "causal_loom/service.hpp"

#include <cmath>
#include <set>

namespace causal_loom {

namespace {

class Request {
public:
    Request(const nlohmann::json& body, std::initializer_list<std::string_view> allowed)
        : body_(body) {
        for (const auto& [key, value] : body.items()) {
            bool known = key == "action";
            for (auto a : allowed) known = known || key == a;
            if (!known) throw RequestError("unexpected field \"" + key + "\"");
        }
    }

    bool has(const char* key) const { return body_.contains(key); }

    std::string string(const char* key) const {
        auto it = body_.find(key);
        if (it == body_.end() || !it->is_string())
            throw RequestError(std::string("field \"") + key + "\" must be a string");
        return it->get<std::string>();
    }

    double number(const char* key) const {
        auto it = body_.find(key);
        if (it == body_.end() || !it->is_number())
            throw RequestError(std::string("field \"") + key + "\" must be a number");
        double v = it->get<double>();
        if (!std::isfinite(v)) throw RequestError(std::string("field \"") + key + "\" must be finite");
        return v;
    }

    VariableId variable(const char* key) const { return as_variable(string(key)); }

    EquationId equation(const char* key) const {
        auto text = string(key);
        if (!is_identifier(text)) throw RequestError("invalid equation id \"" + text + "\"");
        return EquationId(text);
    }

    KbPath path(const char* key) const {
        try {
            return KbPath::parse(string(key));
        } catch (const KbError& e) {
            throw RequestError(e.what());
        }
    }

    std::set<VariableId> variables(const char* key) const {
        auto it = body_.find(key);
        if (it == body_.end() || !it->is_array())
            throw RequestError(std::string("field \"") + key + "\" must be an array of names");
        std::set<VariableId> out;
        for (const auto& item : *it) {
            if (!item.is_string())
                throw RequestError(std::string("field \"") + key + "\" must be an array of names");
            out.insert(as_variable(item.get<std::string>()));
        }
        return out;
    }

private:
    static VariableId as_variable(const std::string& text) {
        if (!is_identifier(text)) throw RequestError("invalid variable name \"" + text + "\"");
        return VariableId(text);
    }

    const nlohmann::json& body_;
};

} // namespace

ActionOutcome apply_action(Workspace& workspace, KnowledgeBase& kb, const nlohmann::json& request) {
    if (!request.is_object()) throw RequestError("action request must be a JSON object");
    auto kind = request.find("action");
    if (kind == request.end() || !kind->is_string())
        throw RequestError("field \"action\" must be a string");
    const auto name = kind->get<std::string>();

    ActionOutcome outcome;
    if (name == "add-mechanism") {
        Request r(request, {"path"});
        outcome.result = workspace.add_mechanism(kb, r.path("path"));
    } else if (name == "merge") {
        Request r(request, {"source", "target"});
        outcome.result = workspace.merge_variables(r.variable("source"), r.variable("target"));
    } else if (name == "set-exogenous") {
        Request r(request, {"variable", "value", "equation"});
        std::optional<EquationId> id;
        if (r.has("equation")) id = r.equation("equation");
        outcome.result = workspace.set_exogenous(r.variable("variable"), r.number("value"), id);
    } else if (name == "release") {
        Request r(request, {"equation"});
        outcome.result = workspace.release_equation(r.equation("equation"));
    } else if (name == "cancel") {
        Request r(request, {});
        outcome.result = workspace.cancel_pending();
    } else if (name == "extract") {
        Request r(request, {"variables", "destination"});
        auto destination = r.path("destination");
        auto extended = workspace.extract(r.variables("variables"), kb, destination);
        auto listing = extended.list(destination);
        for (const auto& m : listing.mechanisms) {
            auto path = destination.child(m);
            bool existed = false;
            try {
                kb.mechanism(path);
                existed = true;
            } catch (const UnknownReferenceError&) {
            }
            if (!existed) outcome.extracted.push_back(path);
        }
        kb = std::move(extended);
        outcome.kb_changed = true;
        outcome.result.ordering = workspace.ordering();
    } else {
        throw RequestError("unknown action \"" + name + "\"");
    }
    return outcome;
}

Json action_response(const ActionOutcome& outcome, const Workspace& workspace) {
    const auto& result = outcome.result;
    Json out = Json::object();
    out["status"] = std::string(to_string(result.status));
    if (result.status == ActionResult::Status::rejected) out["reason"] = result.reason;
    out["warnings"] = result.warnings;
    if (result.status == ActionResult::Status::needs_release && workspace.pending())
        out["candidates"] = candidates_json(*workspace.pending());
    if (const auto& pending = workspace.pending()) {
        Json p = Json::object();
        p["action"] = pending->action;
        p["candidates"] = candidates_json(*pending);
        out["pending"] = std::move(p);
    } else {
        out["pending"] = nullptr;
    }
    if (!outcome.extracted.empty()) {
        out["extracted"] = Json::array();
        for (const auto& path : outcome.extracted) out["extracted"].push_back(path.str());
    }
    out["graph"] = graph_document(workspace.system(), workspace.ordering());
    return out;
}

int http_status_for(const std::exception& error) noexcept {
    if (dynamic_cast<const UnknownReferenceError*>(&error)) return 404;
    if (dynamic_cast<const PendingStateError*>(&error)) return 409;
    if (dynamic_cast<const RequestError*>(&error)) return 400;
    if (dynamic_cast<const ParseError*>(&error)) return 400;
    if (dynamic_cast<const Error*>(&error)) return 422;
    return 500;
}

} // namespace causal_loom
