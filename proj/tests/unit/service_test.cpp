#include "causal_loom/graph_document.hpp"
#include "causal_loom/service.hpp"

#include "../support/service_harness.hpp"
#include "../support/test_support.hpp"

#include "doctest.h"

#include <cstdio>
#include <filesystem>

using namespace causal_loom;
using namespace causal_loom::testing;
using nlohmann::json;

namespace {

KnowledgeBase university_kb() { return kb_load(read_file(fixture_path("university.kb.json"))); }

std::set<ArcTriple> arcs_of(const json& graph) {
    std::set<ArcTriple> out;
    for (const auto& a : graph.at("arcs"))
        out.emplace(a.at("tail").get<std::string>(), a.at("head").get<std::string>(),
                    a.at("kind").get<std::string>());
    return out;
}

std::set<std::string> parents_of(const json& graph, const std::string& head) {
    std::set<std::string> out;
    for (const auto& a : graph.at("arcs"))
        if (a.at("kind") == "directed" && a.at("head") == head) out.insert(a.at("tail").get<std::string>());
    return out;
}

/// The budget session as action requests, ending with the class-size
/// manipulation and release.
std::vector<json> budget_script() {
    return {
        {{"action", "set-exogenous"}, {"variable", "TL"}, {"value", 6}},
        {{"action", "add-mechanism"}, {"path", "/university/finance/salary/f10"}},
        {{"action", "merge"}, {"source", "NS0"}, {"target", "NS"}},
        {{"action", "merge"}, {"source", "NF0"}, {"target", "NF"}},
        {{"action", "set-exogenous"}, {"variable", "TA"}, {"value", 1200}},
        {{"action", "set-exogenous"}, {"variable", "O"}, {"value", 0.48}},
        {{"action", "set-exogenous"}, {"variable", "OI"}, {"value", 30000000}},
        {{"action", "set-exogenous"}, {"variable", "CS"}, {"value", 15}},
        {{"action", "release"}, {"equation", "f9"}},
    };
}

} // namespace

TEST_CASE("graph document") {
    auto s = load_fixture("class_size.sem");
    auto r = causal_ordering(s);
    auto doc = graph_document(s, r);
    CHECK(doc.at("class") == "under-constrained");
    CHECK(doc.at("residual") == json::array({"f7"}));
    CHECK(doc.at("nodes").size() == 6);
    CHECK(doc.at("nodes")[1].at("name") == "CS");
    CHECK(doc.at("nodes")[1].at("solve_order").is_null());
    CHECK(arcs_of(doc) == arc_set(r.graph));

    auto dot = graph_dot(s, r);
    CHECK(dot.find("\"CS\" -> \"TL\" [dir=none];") != std::string::npos);
    CHECK(dot.find("\"NS\" -> \"SFR\";") != std::string::npos);
    std::size_t arrows = 0;
    for (auto pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 2)) ++arrows;
    CHECK(arrows == doc.at("arcs").size());

    auto coupled = participation_system({{"fa", {"X", "Y"}}, {"fb", {"X", "Y"}}});
    CHECK(graph_dot(coupled, causal_ordering(coupled)).find("\"X\" -> \"Y\" [dir=both];") != std::string::npos);
}

TEST_CASE("apply_action validates requests") {
    auto kb = university_kb();
    Workspace ws;
    CHECK_THROWS_AS(apply_action(ws, kb, json::array()), RequestError);
    CHECK_THROWS_AS(apply_action(ws, kb, {{"action", "explode"}}), RequestError);
    CHECK_THROWS_AS(apply_action(ws, kb, {{"action", "merge"}, {"source", "A"}}), RequestError);
    CHECK_THROWS_AS(apply_action(ws, kb, {{"action", "cancel"}, {"extra", 1}}), RequestError);
    CHECK_THROWS_AS(apply_action(ws, kb, {{"action", "set-exogenous"}, {"variable", "A"}, {"value", "x"}}),
                    RequestError);
    CHECK_THROWS_AS(apply_action(ws, kb, {{"action", "add-mechanism"}, {"path", "nope"}}), RequestError);
    CHECK(http_status_for(RequestError("x")) == 400);
    CHECK(http_status_for(UnknownReferenceError("x")) == 404);
    CHECK(http_status_for(PendingStateError("x")) == 409);
    CHECK(http_status_for(ModelError("x")) == 422);
}

TEST_CASE("session lifecycle over HTTP") {
    ServiceHarness h(university_kb());
    auto id = h.create_session();
    CHECK(id.size() == 32);
    CHECK(h.service().session_count() == 1);

    auto graph = h.get("/sessions/" + id + "/graph");
    CHECK(graph.status == 200);
    CHECK(graph.body.at("nodes").empty());

    for (auto path : {"/university/enrollment/f1", "/university/staffing/f2", "/university/teaching/f3"})
        CHECK(h.act(id, {{"action", "add-mechanism"}, {"path", path}}).status == 200);
    auto reply = h.act(id, {{"action", "merge"}, {"source", "NS0"}, {"target", "NS"}});
    CHECK(reply.status == 200);
    reply = h.act(id, {{"action", "merge"}, {"source", "NF0"}, {"target", "NF"}});
    CHECK(reply.body.at("status") == "applied");
    CHECK(arcs_of(reply.body.at("graph")) ==
          std::set<ArcTriple>{{"NF", "SFR", "directed"}, {"NS", "SFR", "directed"}});
    CHECK(arcs_of(h.get("/sessions/" + id + "/graph").body) == arcs_of(reply.body.at("graph")));

    auto dot = h.get("/sessions/" + id + "/graph?format=dot");
    CHECK(dot.status == 200);
    CHECK(dot.text.find("\"NS\" -> \"SFR\";") != std::string::npos);

    auto values = h.get("/sessions/" + id + "/values");
    CHECK(values.status == 200);
    CHECK(values.body.at("values")[2].at("name") == "SFR");
    CHECK(values.body.at("values")[2].at("value").get<double>() == doctest::Approx(22102.0 / 3006.0).epsilon(1e-12));

    auto snapshot = h.get("/sessions/" + id + "/snapshot").body.at("snapshot").get<std::string>();
    auto copy = h.create_session(snapshot);
    CHECK(h.get("/sessions/" + copy + "/graph").body == h.get("/sessions/" + id + "/graph").body);

    CHECK(h.del("/sessions/" + copy).status == 204);
    CHECK(h.get("/sessions/" + copy + "/graph").status == 404);
    CHECK(h.del("/sessions/" + copy).status == 404);
}

TEST_CASE("error statuses") {
    ServiceHarness h(university_kb());
    CHECK(h.get("/sessions/deadbeef/graph").status == 404);
    CHECK(h.act("deadbeef", {{"action", "cancel"}}).status == 404);

    auto id = h.create_session(read_file(fixture_path("university_budget.sem")));
    auto rejected = h.act(id, {{"action", "set-exogenous"}, {"variable", "FS"}, {"value", 1}});
    CHECK(rejected.status == 422);
    CHECK(rejected.body.at("status") == "rejected");
    CHECK(rejected.body.at("reason").get<std::string>().find("FS") != std::string::npos);

    CHECK(h.act(id, {{"action", "add-mechanism"}, {"path", "/no/such"}}).status == 404);
    CHECK(h.act(id, {{"action", "merge"}, {"source", "NS"}, {"target", "Q"}}).status == 404);
    CHECK(h.act(id, {{"action", "release"}, {"equation", "f9"}}).status == 409);
    CHECK(h.act(id, {{"action", "cancel"}}).status == 409);
    CHECK(h.act(id, {{"action", "fly"}}).status == 400);
    CHECK(h.post_raw("/sessions/" + id + "/actions", "{not json").status == 400);

    auto pending = h.act(id, {{"action", "set-exogenous"}, {"variable", "CS"}, {"value", 15}});
    CHECK(pending.status == 200);
    CHECK(pending.body.at("status") == "needs-release");
    CHECK(pending.body.at("candidates").size() == 11);
    CHECK(h.act(id, {{"action", "set-exogenous"}, {"variable", "SFR"}, {"value", 1}}).status == 409);
    CHECK(h.act(id, {{"action", "merge"}, {"source", "NS"}, {"target", "NF"}}).status == 409);
    auto invalid = h.act(id, {{"action", "release"}, {"equation", "f3"}});
    CHECK(invalid.status == 422);
    CHECK(!invalid.body.at("pending").is_null());
    CHECK(h.act(id, {{"action", "cancel"}}).status == 200);

    CHECK(h.post("/sessions", {{"model", "f1: X = 1\nf2: X = 2\n"}}).status == 422);
    CHECK(h.post("/sessions", {{"model", "f1: X = = 1\n"}}).status == 400);
    CHECK(h.post("/sessions", {{"other", 1}}).status == 400);
}

TEST_CASE("knowledge base endpoints") {
    ServiceHarness h(university_kb());
    auto tree = h.get("/kb/tree");
    CHECK(tree.status == 200);
    CHECK(tree.body.at("folders")[0].at("name") == "environment");

    auto search = h.get("/kb/search?var=NS");
    CHECK(search.body.at("paths") == json::array({"/university/enrollment/f1", "/university/finance/salary/f10",
                                                  "/university/teaching/f3", "/university/teaching/f7"}));
    CHECK(h.get("/kb/search?var=ZZ").body.at("paths").empty());
    CHECK(h.get("/kb/search").status == 400);

    CHECK(h.get("/kb/list?path=/university/teaching").body.at("mechanisms") ==
          json::array({"f3", "f7", "f8", "f9"}));
    CHECK(h.get("/kb/list").body.at("folders") == json::array({"environment", "university"}));
    CHECK(h.get("/kb/list?path=/nowhere").status == 404);
    CHECK(h.get("/kb/mechanism?path=/university/teaching/f3").body.at("equation") == "SFR = NS / NF");
}

TEST_CASE("extract persists the knowledge base") {
    auto file = (std::filesystem::temp_directory_path() / "causal_loom_service_kb.json").string();
    kb_save_file(university_kb(), file);
    {
        ServiceHarness h(kb_load_file(file), file);
        auto id = h.create_session(read_file(fixture_path("university_budget.sem")));
        auto reply = h.act(id, {{"action", "extract"},
                                {"variables", {"NS", "NF", "SFR"}},
                                {"destination", "/university/ratios"}});
        CHECK(reply.status == 200);
        CHECK(reply.body.at("extracted") == json::array({"/university/ratios/f1", "/university/ratios/f2",
                                                         "/university/ratios/f3"}));
        CHECK(h.get("/kb/list?path=/university/ratios").body.at("mechanisms") == json::array({"f1", "f2", "f3"}));
        CHECK(h.act(id, {{"action", "extract"}, {"variables", {"SFR"}}, {"destination", "/x"}}).status == 422);
        CHECK(h.act(id, {{"action", "extract"}, {"variables", {"NS", "NF", "SFR"}}, {"destination", "/university/ratios"}})
                  .status == 422);
    }
    auto reloaded = kb_load_file(file);
    CHECK(reloaded.list(KbPath::parse("/university/ratios")).mechanisms.size() == 3);
    std::remove(file.c_str());
}

TEST_CASE("the budget script over HTTP matches direct workspace calls") {
    auto kb = university_kb();
    ServiceHarness h(kb);
    auto id = h.create_session(read_file(fixture_path("class_size.sem")));

    Workspace ws(load_fixture("class_size.sem"));
    auto direct_kb = kb;
    json last;
    for (const auto& step : budget_script()) {
        auto reply = h.act(id, step);
        auto outcome = apply_action(ws, direct_kb, step);
        CHECK(reply.text == action_response(outcome, ws).dump(2) + "\n");
        last = reply.body;
    }
    const auto& graph = last.at("graph");
    CHECK(last.at("status") == "applied");
    CHECK(parents_of(graph, "TL") == std::set<std::string>{"NS", "NF", "CL", "CS"});
    CHECK(parents_of(graph, "FS") == std::set<std::string>{"NS", "NF", "TA", "OI", "O"});
    CHECK(graph.at("class") == "self-contained");

    auto cli_doc = graph_document(ws.system(), causal_ordering(ws.system()));
    CHECK(h.get("/sessions/" + id + "/graph").text == cli_doc.dump(2) + "\n");
}

TEST_CASE("sessions are independent under concurrent load") {
    ServiceHarness h(university_kb());
    std::vector<std::string> ids;
    for (int i = 0; i < 4; ++i) ids.push_back(h.create_session(read_file(fixture_path("class_size.sem"))));

    std::vector<std::thread> threads;
    std::vector<std::string> finals(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        threads.emplace_back([&, i] {
            httplib::Client client("127.0.0.1", h.port());
            for (const auto& step : budget_script())
                client.Post("/sessions/" + ids[i] + "/actions", step.dump(), "application/json");
            finals[i] = client.Get("/sessions/" + ids[i] + "/graph")->body;
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& f : finals) CHECK(f == finals.front());
    CHECK(json::parse(finals.front()).at("class") == "self-contained");
}
