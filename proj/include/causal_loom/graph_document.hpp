#pragma once

#include "causal_loom/evaluate.hpp"
#include "causal_loom/knowledge_base.hpp"
#include "causal_loom/ordering.hpp"
#include "causal_loom/workspace.hpp"

#include "json.hpp"

#include <string>

namespace causal_loom {

using Json = nlohmann::ordered_json;

/// The wire form of an ordering, shared by the CLI and the service:
/// {class, nodes[name, solve_order|null, attributes], arcs[tail, head, kind],
///  complete_subsets[order, equations, variables], residual}.
Json graph_document(const StructuralSystem& system, const OrderingResult& ordering);

/// The same graph in DOT. Directed arcs are plain `->`, bi-directed arcs
/// carry dir=both and undirected arcs dir=none.
std::string graph_dot(const StructuralSystem& system, const OrderingResult& ordering);

Json attributes_json(const VariableAttributes& attributes);
Json witness_json(const OverConstraintWitness& witness);

/// {values: [{name, value|null}]}; null marks a structural-only variable.
Json values_json(const StructuralSystem& system, const ValueTable& values);

/// Candidate list; `locked` marks equations that fix a truly-exogenous
/// variable and so cannot be released.
Json candidates_json(const PendingOverConstraint& pending);

Json mechanism_json(const Mechanism& mechanism);
Json kb_tree_json(const KnowledgeBase& kb);
Json kb_listing_json(const KbListing& listing);

} // namespace causal_loom
