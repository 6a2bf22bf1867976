#include "causal_loom/service.hpp"

#include "causal_loom/evaluate.hpp"

#include "httplib.h"

#include <spdlog/spdlog.h>

#include <random>

namespace causal_loom {

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, const Json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    Json body = Json::object();
    body["error"] = message;
    send_json(res, body, status);
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const nlohmann::json::exception& e) {
            send_error(res, 400, std::string("malformed JSON: ") + e.what());
        } catch (const std::exception& e) {
            int status = http_status_for(e);
            if (status == 500) spdlog::error("{} {}: {}", req.method, req.path, e.what());
            send_error(res, status, e.what());
        }
    };
}

nlohmann::json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return nlohmann::json::object();
    return nlohmann::json::parse(req.body);
}

std::string query(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) throw RequestError(std::string("missing query parameter '") + key + "'");
    return req.get_param_value(key);
}

KbPath query_path(const httplib::Request& req, const char* key) {
    try {
        return KbPath::parse(query(req, key));
    } catch (const KbError& e) {
        throw RequestError(e.what());
    }
}

std::string random_token() {
    static thread_local std::mt19937_64 engine{std::random_device{}()};
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (int word = 0; word < 2; ++word) {
        auto bits = engine();
        for (int i = 0; i < 16; ++i, bits >>= 4) out += digits[bits & 0xf];
    }
    return out;
}

} // namespace

Service::Service(KnowledgeBase kb, std::optional<std::string> kb_file)
    : kb_(std::move(kb)), kb_file_(std::move(kb_file)) {}

std::size_t Service::session_count() const {
    std::lock_guard lock(sessions_mutex_);
    return sessions_.size();
}

std::string Service::create_session(Workspace workspace) {
    auto session = std::make_shared<Session>();
    session->workspace = std::move(workspace);
    std::lock_guard lock(sessions_mutex_);
    std::string id;
    do {
        id = random_token();
    } while (sessions_.contains(id));
    sessions_.emplace(id, std::move(session));
    return id;
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& id) const {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw UnknownReferenceError("unknown session " + id);
    return it->second;
}

void Service::install(httplib::Server& server) {
    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req);
        if (!body.is_object()) throw RequestError("session request must be a JSON object");
        Workspace workspace;
        for (const auto& [key, value] : body.items()) {
            if (key != "model") throw RequestError("unexpected field \"" + key + "\"");
            if (!value.is_string()) throw RequestError("field \"model\" must be a string");
            workspace = restore_workspace(value.get<std::string>());
        }
        Json doc = graph_document(workspace.system(), workspace.ordering());
        auto id = create_session(std::move(workspace));
        spdlog::debug("created session {}", id);
        Json out = Json::object();
        out["session"] = id;
        out["graph"] = std::move(doc);
        send_json(res, out, 201);
    }));

    server.Delete("/sessions/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto& id = req.path_params.at("id");
        std::lock_guard lock(sessions_mutex_);
        if (sessions_.erase(id) == 0) throw UnknownReferenceError("unknown session " + id);
        res.status = 204;
    }));

    server.Get("/sessions/:id/graph", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto session = find_session(req.path_params.at("id"));
        std::lock_guard lock(session->mutex);
        const auto& ws = session->workspace;
        auto format = req.has_param("format") ? req.get_param_value("format") : std::string("json");
        if (format == "dot") {
            res.set_content(graph_dot(ws.system(), ws.ordering()), "text/vnd.graphviz");
        } else if (format == "json") {
            send_json(res, graph_document(ws.system(), ws.ordering()));
        } else {
            throw RequestError("unknown format '" + format + "'");
        }
    }));

    server.Get("/sessions/:id/values", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto session = find_session(req.path_params.at("id"));
        std::lock_guard lock(session->mutex);
        const auto& ws = session->workspace;
        send_json(res, values_json(ws.system(), evaluate_forward(ws.system(), ws.ordering())));
    }));

    server.Get("/sessions/:id/snapshot", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto session = find_session(req.path_params.at("id"));
        std::lock_guard lock(session->mutex);
        Json out = Json::object();
        out["snapshot"] = snapshot_workspace(session->workspace);
        send_json(res, out);
    }));

    server.Post("/sessions/:id/actions", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto session = find_session(req.path_params.at("id"));
        auto body = parse_body(req);
        std::lock_guard lock(session->mutex);
        bool writes_kb = body.is_object() && body.value("action", "") == "extract";

        ActionOutcome outcome;
        if (writes_kb) {
            std::unique_lock kb_lock(kb_mutex_);
            auto kb = kb_;
            outcome = apply_action(session->workspace, kb, body);
            if (kb_file_) kb_save_file(kb, *kb_file_);
            kb_ = std::move(kb);
        } else {
            std::shared_lock kb_lock(kb_mutex_);
            outcome = apply_action(session->workspace, kb_, body);
        }
        spdlog::debug("session {}: {} -> {}", req.path_params.at("id"), body.value("action", ""),
                      to_string(outcome.result.status));
        int status = outcome.result.status == ActionResult::Status::rejected ? 422 : 200;
        send_json(res, action_response(outcome, session->workspace), status);
    }));

    server.Get("/kb/tree", guarded([this](const httplib::Request&, httplib::Response& res) {
        std::shared_lock lock(kb_mutex_);
        send_json(res, kb_tree_json(kb_));
    }));

    server.Get("/kb/list", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto path = req.has_param("path") ? query_path(req, "path") : KbPath();
        std::shared_lock lock(kb_mutex_);
        send_json(res, kb_listing_json(kb_.list(path)));
    }));

    server.Get("/kb/mechanism", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto path = query_path(req, "path");
        std::shared_lock lock(kb_mutex_);
        send_json(res, mechanism_json(kb_.mechanism(path)));
    }));

    server.Get("/kb/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto var = query(req, "var");
        std::shared_lock lock(kb_mutex_);
        Json out = Json::object();
        out["paths"] = Json::array();
        for (const auto& path : kb_.search_by_variable(var)) out["paths"].push_back(path.str());
        send_json(res, out);
    }));

    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::debug("{} {} {}", req.method, req.path, res.status);
    });
}

} // namespace causal_loom
