#pragma once

#include "causal_loom/error.hpp"
#include "causal_loom/graph_document.hpp"
#include "causal_loom/knowledge_base.hpp"
#include "causal_loom/workspace.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace causal_loom {

/// A request body that is not a well-formed action.
class RequestError : public Error {
public:
    using Error::Error;
};

struct ActionOutcome {
    ActionResult result;
    std::vector<KbPath> extracted; ///< mechanisms stored by an extract action
    bool kb_changed = false;
};

/// Decodes one action object and applies it. Shapes:
///   {"action": "add-mechanism", "path": "/a/b"}
///   {"action": "merge", "source": "NS0", "target": "NS"}
///   {"action": "set-exogenous", "variable": "TL", "value": 6, "equation"?: "f9"}
///   {"action": "release", "equation": "f9"}
///   {"action": "cancel"}
///   {"action": "extract", "variables": ["NS", ...], "destination": "/a"}
/// An extract replaces `kb` with the extended knowledge base.
ActionOutcome apply_action(Workspace& workspace, KnowledgeBase& kb, const nlohmann::json& request);

/// Response body for an action: status, reason, warnings, candidates,
/// pending, extracted and the fresh graph document.
Json action_response(const ActionOutcome& outcome, const Workspace& workspace);

/// HTTP status for an error raised while serving a request.
int http_status_for(const std::exception& error) noexcept;

/// In-memory sessions over a shared knowledge base. Actions on one session
/// run one at a time; distinct sessions proceed in parallel. KB reads share
/// a lock, extract takes it exclusively and, when `kb_file` is set, writes
/// the knowledge base back to disk.
class Service {
public:
    explicit Service(KnowledgeBase kb, std::optional<std::string> kb_file = std::nullopt);

    void install(httplib::Server& server);

    std::size_t session_count() const;

private:
    struct Session {
        std::mutex mutex;
        Workspace workspace;
    };

    std::string create_session(Workspace workspace);
    std::shared_ptr<Session> find_session(const std::string& id) const;

    mutable std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    mutable std::shared_mutex kb_mutex_;
    KnowledgeBase kb_;
    std::optional<std::string> kb_file_;
};

} // namespace causal_loom
