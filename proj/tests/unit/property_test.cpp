#include "../support/properties.hpp"

#include "doctest.h"

using namespace causal_loom::testing;

namespace {

void require_clean(const PropertyReport& report, std::size_t min_cases) {
    INFO(report.detail);
    CHECK(report.cases >= min_cases);
    CHECK(report.violations == 0);
}

} // namespace

TEST_CASE("minimal self-contained subsets are disjoint") {
    require_clean(check_subsets_disjoint(non_over_constrained_corpus(101, 1000, 10)), 1000);
}

TEST_CASE("every derived system is non-over-constrained") {
    require_clean(check_derived_systems(non_over_constrained_corpus(102, 1000, 10)), 1000);
}

TEST_CASE("residual is non-empty exactly for under-constrained systems") {
    require_clean(check_residual_iff_under_constrained(non_over_constrained_corpus(103, 1000, 10)), 1000);
}

TEST_CASE("matching engine agrees with subset enumeration") {
    require_clean(check_oracle_equivalence(mixed_corpus(104, 600, 8)), 600);
}

TEST_CASE("graph sanity and determinism") {
    auto corpus = non_over_constrained_corpus(105, 500, 10);
    require_clean(check_graph_sanity(corpus), 500);
    require_clean(check_determinism(corpus), 500);
}

TEST_CASE("text and knowledge-base round trips") {
    require_clean(check_sem_round_trip(106, 500), 500);
    require_clean(check_kb_round_trip(107, 200), 200);
}

TEST_CASE("forward evaluation satisfies the equations") {
    require_clean(check_evaluation(108, 300), 300);
}

TEST_CASE("rename and merge properties") {
    require_clean(check_rename_and_merge(109, 500), 500);
}
