#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/discourse.hpp"
#include "core/knowledge.hpp"
#include "core/values.hpp"

namespace planrec {

enum class ProvokingRule { precondition, effect, body };

const char* to_string(ProvokingRule rule);

// One candidate reading of a single statement: an operator with the
// statement's arguments bound into its parameters.
struct PlanFragment {
    std::string op;
    std::map<std::string, BoundParam> bindings;  // user_statement tags only
    ProvokingRule rule = ProvokingRule::body;
    double probability = 0.0;
    int statement = -1;
};

struct Plan {
    std::string op;
    std::map<std::string, BoundParam> params;  // every declared param present
    std::vector<int> origin_statements;
};

enum class InterpStatus { in_progress, complete, stalled };

const char* to_string(InterpStatus status);

struct Interpretation {
    std::vector<Plan> plans;
    double probability = 0.0;
    std::vector<RelationCandidate> relations;  // applied relation history
    InterpStatus status = InterpStatus::in_progress;
};

// ---------------------------------------------------------------------------

// All readings of a statement with probabilities summing to 1. Rule masses
// come from the config priors (or the meta-bias row), the mass of rules that
// match nothing is redistributed proportionally over the rules that do, and
// each rule splits its mass equally among its fragments.
// Throws NoInterpretationError when nothing matches.
std::vector<PlanFragment> interpret_predicate(const Predicate& pred, const KnowledgeBase& kb,
                                              int statement_index = -1);

enum class UnifyStatus { merged, value_conflict, unrelated };

struct UnifyResult {
    UnifyStatus status = UnifyStatus::unrelated;
    Plan plan;
};

// Merge a fragment into a plan. Works when the operators are equal or one
// specializes the other through transitive body membership; the more
// specific operator names the result.
UnifyResult unify(const Plan& plan, const PlanFragment& frag, const KnowledgeBase& kb);

// Materialize a fragment as a standalone plan, padding every declared
// parameter of its operator with a domain-sized undefined value.
Plan plan_from_fragment(const PlanFragment& frag, const KnowledgeBase& kb);

struct ApplyResult {
    bool valid = false;
    Interpretation interp;
};

// Attach the fragment to the interpretation under one relation candidate.
// Elaboration that conflicts is invalid; correction overwrites conflicting
// parameters with the statement's values.
ApplyResult apply_relation(const Interpretation& interp, const PlanFragment& frag,
                           const RelationCandidate& rel, const KnowledgeBase& kb);

// Full direct-inference update: every (interpretation, fragment, relation)
// triple, probabilities multiplied out and normalized, equivalent results
// coalesced. Throws EmptySetError when no candidate is valid.
std::vector<Interpretation> combine(const std::vector<Interpretation>& live,
                                    const std::vector<PlanFragment>& frags, const CueSet& cues,
                                    const KnowledgeBase& kb);

// Normalize, drop everything below `threshold` relative to the leader,
// renormalize and sort by descending probability (stable).
std::vector<Interpretation> normalize_and_prune(std::vector<Interpretation> set,
                                                double threshold);

}  // namespace planrec
