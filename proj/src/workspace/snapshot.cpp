#include "causal_loom/error.hpp"
#include "causal_loom/sem_format.hpp"
#include "causal_loom/workspace.hpp"

namespace causal_loom {

namespace {

constexpr std::string_view kProvenanceTag = "#% ";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

std::string snapshot_workspace(const Workspace& workspace) {
    std::string out = serialize_model(workspace.system());
    bool header = false;
    for (const auto& [id, path] : workspace.provenance()) {
        if (!path) continue;
        if (!header) {
            out += "\n#% provenance\n";
            header = true;
        }
        out += std::string(kProvenanceTag) + id.str() + " " + path->str() + "\n";
    }
    return out;
}

Workspace restore_workspace(std::string_view snapshot) {
    Provenance provenance;
    bool has_statements = false;
    std::size_t line_no = 0;
    for (std::size_t start = 0; start <= snapshot.size();) {
        auto end = snapshot.find('\n', start);
        if (end == std::string_view::npos) end = snapshot.size();
        auto line = snapshot.substr(start, end - start);
        start = end + 1;
        ++line_no;

        if (line.starts_with(kProvenanceTag)) {
            auto rest = trim(line.substr(kProvenanceTag.size()));
            if (rest == "provenance") continue;
            auto space = rest.find(' ');
            if (space == std::string_view::npos)
                throw ParseError(line_no, 1, "malformed provenance line");
            try {
                provenance.emplace(EquationId(std::string(rest.substr(0, space))),
                                   KbPath::parse(trim(rest.substr(space + 1))));
            } catch (const Error& e) {
                throw ParseError(line_no, 1, e.what());
            }
            continue;
        }
        auto content = trim(line.substr(0, line.find('#')));
        if (!content.empty()) has_statements = true;
    }

    if (!has_statements) {
        if (!provenance.empty()) throw ParseError(1, 1, "provenance without equations");
        return Workspace();
    }
    return Workspace(parse_model(snapshot), std::move(provenance));
}

} // namespace causal_loom
