#include "causal_loom/error.hpp"
#include "causal_loom/workspace.hpp"

#include "../support/test_support.hpp"

#include "doctest.h"

using namespace causal_loom;
using namespace causal_loom::testing;

namespace {

KnowledgeBase university_kb() { return kb_load(read_file(fixture_path("university.kb.json"))); }

KbPath mech(const char* path) { return KbPath::parse(path); }

using Status = ActionResult::Status;

std::set<std::string> valid_candidates(const ActionResult& r) {
    std::set<std::string> out;
    for (const auto& c : r.candidates)
        if (c.valid) out.insert(c.equation.str());
    return out;
}

void require_consistent(const Workspace& ws) {
    REQUIRE(classify(ws.system()) != SystemClass::over_constrained);
    REQUIRE(ws.ordering() == causal_ordering(ws.system()));
}

Workspace class_size_workspace() { return Workspace(load_fixture("class_size.sem")); }

/// Runs the budget session up to the point where the model is complete.
Workspace budget_session(const KnowledgeBase& kb) {
    auto ws = class_size_workspace();
    REQUIRE(ws.set_exogenous(var("TL"), 6).status == Status::applied);
    REQUIRE(ws.add_mechanism(kb, mech("/university/finance/salary/f10")).status == Status::applied);
    REQUIRE(ws.merge_variables(var("NS0"), var("NS")).status == Status::applied);
    REQUIRE(ws.merge_variables(var("NF0"), var("NF")).status == Status::applied);
    REQUIRE(ws.set_exogenous(var("TA"), 1200).status == Status::applied);
    REQUIRE(ws.set_exogenous(var("O"), 0.48).status == Status::applied);
    REQUIRE(ws.set_exogenous(var("OI"), 30000000).status == Status::applied);
    return ws;
}

} // namespace

TEST_CASE("empty workspace") {
    Workspace ws;
    CHECK(ws.system().empty());
    CHECK(ws.ordering().graph.nodes().empty());
    CHECK_FALSE(ws.pending());
}

TEST_CASE("add a mechanism to an empty workspace") {
    auto kb = university_kb();
    Workspace ws;
    auto r = ws.add_mechanism(kb, mech("/university/finance/salary/f10"));
    CHECK(r.status == Status::applied);
    CHECK(r.warnings.empty());
    CHECK(ws.system().has_equation(eq("f10")));
    CHECK(ws.provenance().at(eq("f10")) == mech("/university/finance/salary/f10"));
    CHECK(ws.ordering().residual == eqs({"f10"}));
    for (const auto& a : ws.ordering().graph.arcs()) CHECK(a.kind == ArcKind::undirected);
    CHECK(ws.ordering().graph.arcs().size() == 15);
    CHECK(ws.system().attributes(var("FS")).manipulativity == Manipulativity::truly_endogenous);
    CHECK_THROWS_AS(ws.add_mechanism(kb, mech("/university/nothing")), UnknownReferenceError);
}

TEST_CASE("importing renames colliding variables") {
    auto kb = university_kb();
    auto ws = class_size_workspace();
    REQUIRE(ws.set_exogenous(var("TL"), 6).status == Status::applied);
    CHECK(ws.system().has_equation(eq("f9")));
    CHECK(ws.ordering().system_class == SystemClass::self_contained);

    auto r = ws.add_mechanism(kb, mech("/university/finance/salary/f10"));
    REQUIRE(r.status == Status::applied);
    CHECK(r.warnings == std::vector<std::string>{"renamed NS to NS0", "renamed NF to NF0"});
    CHECK(names(ws.system().equation(eq("f10")).participants()) ==
          std::vector<std::string>{"FS", "OI", "TA", "NS0", "NF0", "O"});
    CHECK(ws.ordering().residual == eqs({"f10"}));

    std::set<ArcTriple> cluster;
    const char* residual[] = {"FS", "NF0", "NS0", "O", "OI", "TA"};
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) cluster.emplace(residual[i], residual[j], "undirected");
    std::set<ArcTriple> undirected;
    for (const auto& a : arc_set(ws.ordering().graph))
        if (std::get<2>(a) == "undirected") undirected.insert(a);
    CHECK(undirected == cluster);
    for (auto v : residual) CHECK_FALSE(ws.ordering().graph.nodes().at(var(v)).has_value());

    auto again = ws.add_mechanism(kb, mech("/university/finance/salary/f10"));
    REQUIRE(again.status == Status::applied);
    CHECK(ws.system().has_equation(eq("f10_1")));
    CHECK(ws.system().has_variable(var("NS1")));
    CHECK(ws.system().has_variable(var("FS0")));
    require_consistent(ws);
}

TEST_CASE("merging renamed variables back") {
    auto kb = university_kb();
    auto ws = class_size_workspace();
    ws.set_exogenous(var("TL"), 6);
    ws.add_mechanism(kb, mech("/university/finance/salary/f10"));
    CHECK(ws.merge_variables(var("NS0"), var("NS")).status == Status::applied);
    CHECK(ws.merge_variables(var("NF0"), var("NF")).status == Status::applied);
    CHECK(names(ws.system().equation(eq("f10")).participants()) ==
          std::vector<std::string>{"FS", "OI", "TA", "NS", "NF", "O"});

    std::set<ArcTriple> expected_f10;
    for (auto tail : {"NS", "NF"})
        for (auto head : {"FS", "O", "OI", "TA"}) expected_f10.emplace(tail, head, "directed");
    const char* cluster[] = {"FS", "O", "OI", "TA"};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) expected_f10.emplace(cluster[i], cluster[j], "undirected");
    std::set<ArcTriple> touching;
    for (const auto& a : arc_set(ws.ordering().graph)) {
        for (auto c : cluster)
            if (std::get<1>(a) == c) touching.insert(a);
    }
    CHECK(touching == expected_f10);
    require_consistent(ws);
}

TEST_CASE("merge outcomes") {
    Workspace over(participation_system({{"fa", {"X", "Y"}}, {"fb", {"Y"}}}));
    auto before = over;
    auto r = over.merge_variables(var("X"), var("Y"));
    CHECK(r.status == Status::needs_release);
    CHECK_FALSE(r.candidates.empty());
    CHECK(over.system() == before.system());
    REQUIRE(over.pending());
    CHECK(over.pending()->proposed.variable_count() == 1);

    Workspace under(participation_system({{"fa", {"A", "B"}}, {"fb", {"C", "D"}}}));
    auto n = under.system().variable_count();
    CHECK(under.merge_variables(var("A"), var("C")).status == Status::applied);
    CHECK(under.system().variable_count() == n - 1);

    CHECK_THROWS_AS(under.merge_variables(var("B"), var("Q")), UnknownReferenceError);
    CHECK_THROWS_AS(under.merge_variables(var("B"), var("B")), ModelError);
}

TEST_CASE("merge warns about discarded attributes") {
    auto kb = university_kb();
    Workspace ws;
    ws.add_mechanism(kb, mech("/environment/sunlight/f5"));
    ws.add_mechanism(kb, mech("/university/enrollment/f1"));
    auto r = ws.merge_variables(var("S"), var("NS"));
    CHECK(r.status == Status::applied);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("truly-exogenous") != std::string::npos);
    CHECK(ws.system().attributes(var("NS")).is_default());

    Workspace plain(participation_system({{"fa", {"X", "Z"}}, {"fb", {"Y", "W"}}}));
    CHECK(plain.merge_variables(var("X"), var("Y")).warnings.empty());
}

TEST_CASE("set exogenous") {
    auto ws = class_size_workspace();
    auto r = ws.set_exogenous(var("TL"), 6);
    CHECK(r.status == Status::applied);
    CHECK(ws.system().equation(eq("f9")).assigned_value() == 6.0);
    CHECK(ws.ordering().system_class == SystemClass::self_contained);
    CHECK_FALSE(ws.provenance().at(eq("f9")).has_value());

    Workspace endo(load_fixture("university_budget.sem"));
    auto before = endo;
    auto rejected = endo.set_exogenous(var("FS"), 1);
    CHECK(rejected.status == Status::rejected);
    CHECK(rejected.reason.find("FS") != std::string::npos);
    CHECK(endo == before);

    CHECK_THROWS_AS(ws.set_exogenous(var("Nope"), 1), UnknownReferenceError);
    CHECK_THROWS_AS(ws.set_exogenous(var("SFR"), 1, eq("f3")), ModelError);
}

TEST_CASE("over-constraining actions are held pending") {
    Workspace ws(load_fixture("university_budget.sem"));
    auto before = ws;
    auto r = ws.set_exogenous(var("CS"), 15);
    CHECK(r.status == Status::needs_release);
    CHECK(valid_candidates(r).contains("f9"));
    REQUIRE(ws.pending());
    CHECK(ws.system() == before.system());
    CHECK(ws.ordering() == before.ordering());
    CHECK(ws.pending()->proposed.has_equation(eq("f14")));

    for (const auto& c : r.candidates) {
        bool ok = classify(remove_equation(ws.pending()->proposed, c.equation)) != SystemClass::over_constrained;
        CHECK(c.valid == ok);
    }

    CHECK_THROWS_AS(ws.set_exogenous(var("SFR"), 1), PendingStateError);
    CHECK_THROWS_AS(ws.merge_variables(var("NS"), var("NF")), PendingStateError);
    CHECK_THROWS_AS(ws.add_mechanism(university_kb(), mech("/university/enrollment/f1")), PendingStateError);
    CHECK_THROWS_AS(ws.extract({var("NS")}, university_kb(), mech("/x")), PendingStateError);
}

TEST_CASE("release") {
    Workspace ws(load_fixture("university_budget.sem"));
    ws.set_exogenous(var("CS"), 15);

    auto pending = ws.pending();
    auto invalid = ws.release_equation(eq("f3"));
    CHECK(invalid.status == Status::rejected);
    CHECK(ws.pending() == pending);

    CHECK_THROWS_AS(ws.release_equation(eq("f99")), UnknownReferenceError);

    auto r = ws.release_equation(eq("f9"));
    REQUIRE(r.status == Status::applied);
    CHECK_FALSE(ws.pending());
    CHECK(names(ws.ordering().graph.parents(var("TL"))) == std::vector<std::string>{"CL", "CS", "NF", "NS"});
    CHECK_FALSE(ws.system().has_equation(eq("f9")));
    CHECK(r.ordering == ws.ordering());
    require_consistent(ws);

    CHECK_THROWS_AS(ws.release_equation(eq("f1")), PendingStateError);
}

TEST_CASE("release in the ratio model") {
    Workspace ws(load_fixture("student_faculty_ratio.sem"));
    auto r = ws.set_exogenous(var("SFR"), 10, eq("f4"));
    REQUIRE(r.status == Status::needs_release);
    CHECK(valid_candidates(r).contains("f2"));
    REQUIRE(ws.release_equation(eq("f2")).status == Status::applied);
    CHECK(arc_set(ws.ordering().graph) ==
          std::set<ArcTriple>{{"NS", "NF", "directed"}, {"SFR", "NF", "directed"}});
}

TEST_CASE("truly exogenous designations cannot be released") {
    auto kb = university_kb();
    Workspace ws;
    ws.add_mechanism(kb, mech("/environment/sunlight/f5"));
    ws.add_mechanism(kb, mech("/environment/sunlight/f6"));
    ws.merge_variables(var("S0"), var("S"));
    REQUIRE(ws.system().has_equation(eq("f6")));
    auto r = ws.set_exogenous(var("G"), 1);
    REQUIRE(r.status == Status::needs_release);
    CHECK(ws.pending()->locked == std::set<EquationId>{eq("f6")});
    CHECK(valid_candidates(r).contains("f6"));
    auto refused = ws.release_equation(eq("f6"));
    CHECK(refused.status == Status::rejected);
    CHECK(ws.pending());
    CHECK(ws.release_equation(eq("f5")).status == Status::applied);
}

TEST_CASE("cancel") {
    Workspace ws(load_fixture("university_budget.sem"));
    auto before = ws;
    auto first = ws.set_exogenous(var("CS"), 15);
    CHECK(ws.cancel_pending().status == Status::applied);
    CHECK(ws == before);
    CHECK_THROWS_AS(ws.cancel_pending(), PendingStateError);
    auto second = ws.set_exogenous(var("CS"), 15);
    CHECK(second == first);
}

TEST_CASE("extract") {
    auto kb = university_kb();
    auto ws = budget_session(kb);
    auto before = ws;
    auto extended = ws.extract({var("NS"), var("NF"), var("SFR")}, kb, mech("/university/extracted"));
    CHECK(extended.list(mech("/university/extracted")).mechanisms == std::vector<std::string>{"f1", "f2", "f3"});
    CHECK(ws == before);
    auto f3 = extended.mechanism(mech("/university/extracted/f3"));
    CHECK(f3.equation_text() == "SFR = NS / NF");
    CHECK(kb_load(kb_save(extended)) == extended);

    CHECK_THROWS_AS(ws.extract({var("SFR")}, kb, mech("/x")), ModelError);
    CHECK_THROWS_AS(ws.extract({var("Nope")}, kb, mech("/x")), UnknownReferenceError);

    std::set<VariableId> all;
    for (const auto& [v, a] : ws.system().variables()) all.insert(v);
    auto everything = ws.extract(all, kb, mech("/all"));
    CHECK(everything.list(mech("/all")).mechanisms.size() == ws.system().equation_count());
    CHECK(everything.mechanism(mech("/all/f10")).attributes().at(var("FS")).manipulativity ==
          Manipulativity::truly_endogenous);

    CHECK_THROWS_AS(extended.put(mech("/university/extracted"), f3), KbError);
}

TEST_CASE("the budget session end to end") {
    auto kb = university_kb();
    auto ws = budget_session(kb);
    CHECK(ws.ordering().system_class == SystemClass::self_contained);
    CHECK(names(ws.ordering().graph.parents(var("FS"))) ==
          std::vector<std::string>{"NF", "NS", "O", "OI", "TA"});
    CHECK(names(ws.ordering().graph.parents(var("CS"))) == std::vector<std::string>{"CL", "NF", "NS", "TL"});
    CHECK(ws.system().has_equation(eq("f11")));
    CHECK(ws.system().has_equation(eq("f12")));
    CHECK(ws.system().has_equation(eq("f13")));

    auto r = ws.set_exogenous(var("CS"), 15);
    REQUIRE(r.status == Status::needs_release);
    CHECK(ws.pending()->proposed.has_equation(eq("f14")));
    REQUIRE(ws.release_equation(eq("f9")).status == Status::applied);
    CHECK_FALSE(ws.ordering().graph.nodes().at(var("TL")) == std::nullopt);
    CHECK(names(ws.ordering().graph.parents(var("TL"))) == std::vector<std::string>{"CL", "CS", "NF", "NS"});

    auto replay = budget_session(kb);
    replay.set_exogenous(var("CS"), 15);
    replay.release_equation(eq("f9"));
    CHECK(replay == ws);
}

TEST_CASE("snapshots") {
    auto kb = university_kb();
    auto ws = budget_session(kb);
    auto text = snapshot_workspace(ws);
    CHECK(text.find("#% f10 /university/finance/salary/f10\n") != std::string::npos);
    auto restored = restore_workspace(text);
    CHECK(restored == ws);
    CHECK(parse_model(text) == ws.system());

    CHECK(restore_workspace("") == Workspace());
    CHECK(restore_workspace(snapshot_workspace(Workspace())) == Workspace());
    CHECK_THROWS_AS(restore_workspace("f1: X = 1\nf2: X = 2\n"), OverConstrainedError);
    CHECK_THROWS_AS(restore_workspace("f1: X = 1\n#% f2 /a\n"), UnknownReferenceError);
    CHECK_THROWS_AS(restore_workspace("f1: X = 1\n#% f1\n"), ParseError);
}
