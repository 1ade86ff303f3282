#include "core/direct.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace planrec {

const char* to_string(ProvokingRule rule) {
    switch (rule) {
        case ProvokingRule::precondition: return "precondition";
        case ProvokingRule::effect: return "effect";
        case ProvokingRule::body: return "body";
    }
    return "body";
}

const char* to_string(InterpStatus status) {
    switch (status) {
        case InterpStatus::in_progress: return "in_progress";
        case InterpStatus::complete: return "complete";
        case InterpStatus::stalled: return "stalled";
    }
    return "in_progress";
}

// ---------------------------------------------------------------------------
// interpret_predicate
// ---------------------------------------------------------------------------

namespace {

// Bind the statement's arguments through a pattern's argument map. Fails when
// an argument has no mapping or its value does not fit the target domain.
bool bind_through_pattern(const Predicate& pred, const Operator& op, const PredPattern& pattern,
                          const KnowledgeBase& kb, std::map<std::string, BoundParam>& out) {
    const StrengthTag stated = kb.config.tag(StrengthKind::user_statement);
    for (const auto& [arg, value] : pred.args) {
        auto it = pattern.args.find(arg);
        if (it == pattern.args.end()) return false;
        const ParamDecl* decl = op.find_param(it->second);
        if (decl == nullptr || !kb.value_fits_domain(value, decl->domain)) return false;
        out[it->second] = BoundParam{value, stated};
    }
    return true;
}

// Bind arguments directly by parameter name; used when the statement names
// the operator itself or an action inside another operator's body.
bool bind_by_name(const Predicate& pred, const Operator& op, const KnowledgeBase& kb,
                  std::map<std::string, BoundParam>& out) {
    const StrengthTag stated = kb.config.tag(StrengthKind::user_statement);
    for (const auto& [arg, value] : pred.args) {
        const ParamDecl* decl = op.find_param(arg);
        if (decl == nullptr || !kb.value_fits_domain(value, decl->domain)) return false;
        out[arg] = BoundParam{value, stated};
    }
    return true;
}

struct RuleMatches {
    ProvokingRule rule;
    double mass = 0.0;
    std::vector<PlanFragment> fragments;
};

}  // namespace

std::vector<PlanFragment> interpret_predicate(const Predicate& pred, const KnowledgeBase& kb,
                                              int statement_index) {
    const RuleMassTriple& masses = kb.config.masses_for_meta(pred.meta);
    RuleMatches buckets[3] = {
        {ProvokingRule::precondition, masses.precondition, {}},
        {ProvokingRule::effect, masses.effect, {}},
        {ProvokingRule::body, masses.body, {}},
    };

    auto add_fragment = [&](RuleMatches& bucket, const std::string& op_name,
                            std::map<std::string, BoundParam> bindings) {
        PlanFragment frag;
        frag.op = op_name;
        frag.bindings = std::move(bindings);
        frag.rule = bucket.rule;
        frag.statement = statement_index;
        bucket.fragments.push_back(std::move(frag));
    };

    for (const auto& op : kb.operators) {
        for (const auto& pattern : op.preconditions) {
            if (pattern.predicate != pred.name) continue;
            std::map<std::string, BoundParam> bindings;
            if (bind_through_pattern(pred, op, pattern, kb, bindings)) {
                add_fragment(buckets[0], op.name, std::move(bindings));
            }
        }
        for (const auto& pattern : op.effects) {
            if (pattern.predicate != pred.name) continue;
            std::map<std::string, BoundParam> bindings;
            if (bind_through_pattern(pred, op, pattern, kb, bindings)) {
                add_fragment(buckets[1], op.name, std::move(bindings));
            }
        }
    }

    // Body rule: a statement naming a domain action is the trivial case of
    // that action's own composition, and also evidence for any operator whose
    // body (transitively) contains it.
    if (const Operator* self = kb.find_operator(pred.name)) {
        std::map<std::string, BoundParam> bindings;
        if (bind_by_name(pred, *self, kb, bindings)) {
            add_fragment(buckets[2], self->name, std::move(bindings));
        }
    }
    for (const auto& op : kb.operators) {
        if (op.name == pred.name || !kb.specializes(pred.name, op.name)) continue;
        std::map<std::string, BoundParam> bindings;
        if (bind_by_name(pred, op, kb, bindings)) {
            add_fragment(buckets[2], op.name, std::move(bindings));
        }
    }

    double successful_mass = 0.0;
    for (const auto& bucket : buckets) {
        if (!bucket.fragments.empty()) successful_mass += bucket.mass;
    }
    if (successful_mass <= 0.0) {
        throw NoInterpretationError("no operator interprets predicate '" + pred.name + "'");
    }

    std::vector<PlanFragment> out;
    for (auto& bucket : buckets) {
        if (bucket.fragments.empty()) continue;
        const double rule_mass = bucket.mass / successful_mass;
        const double each = rule_mass / static_cast<double>(bucket.fragments.size());
        for (auto& frag : bucket.fragments) {
            frag.probability = each;
            out.push_back(std::move(frag));
        }
    }

    // Optional domain-knowledge bias over operator priors; identity when the
    // config ships no bias table.
    if (!kb.config.operator_prior_bias.empty()) {
        double total = 0.0;
        for (auto& frag : out) {
            auto it = kb.config.operator_prior_bias.find(frag.op);
            if (it != kb.config.operator_prior_bias.end()) frag.probability *= it->second;
            total += frag.probability;
        }
        for (auto& frag : out) frag.probability /= total;
    }
    return out;
}

// ---------------------------------------------------------------------------
// unify / plan construction
// ---------------------------------------------------------------------------

namespace {

// More specific operator wins; empty when the two are unrelated.
std::optional<std::string> resolve_operator(const std::string& a, const std::string& b,
                                            const KnowledgeBase& kb) {
    if (a == b) return a;
    if (kb.specializes(a, b)) return a;
    if (kb.specializes(b, a)) return b;
    return std::nullopt;
}

void pad_declared_params(Plan& plan, const KnowledgeBase& kb) {
    const Operator* op = kb.find_operator(plan.op);
    if (op == nullptr) return;
    for (const auto& decl : op->params) {
        if (plan.params.count(decl.name) == 0) {
            plan.params[decl.name] =
                BoundParam{kb.undefined_value(decl), kb.config.tag(StrengthKind::undefined)};
        }
    }
}

void add_origin(Plan& plan, int statement) {
    if (statement < 0) return;
    auto& origins = plan.origin_statements;
    if (std::find(origins.begin(), origins.end(), statement) == origins.end()) {
        origins.push_back(statement);
        std::sort(origins.begin(), origins.end());
    }
}

}  // namespace

Plan plan_from_fragment(const PlanFragment& frag, const KnowledgeBase& kb) {
    Plan plan;
    plan.op = frag.op;
    plan.params = frag.bindings;
    add_origin(plan, frag.statement);
    pad_declared_params(plan, kb);
    return plan;
}

UnifyResult unify(const Plan& plan, const PlanFragment& frag, const KnowledgeBase& kb) {
    UnifyResult result;
    auto op = resolve_operator(plan.op, frag.op, kb);
    if (!op) {
        result.status = UnifyStatus::unrelated;
        return result;
    }
    Plan merged = plan;
    merged.op = *op;
    for (const auto& [name, incoming] : frag.bindings) {
        auto it = merged.params.find(name);
        if (it == merged.params.end()) {
            merged.params[name] = incoming;
            continue;
        }
        const MergeResult m = merge_params(it->second, incoming);
        if (m.status == MergeStatus::conflict) {
            result.status = UnifyStatus::value_conflict;
            return result;
        }
        it->second = m.param;
    }
    add_origin(merged, frag.statement);
    pad_declared_params(merged, kb);
    result.status = UnifyStatus::merged;
    result.plan = std::move(merged);
    return result;
}

// ---------------------------------------------------------------------------
// apply_relation
// ---------------------------------------------------------------------------

ApplyResult apply_relation(const Interpretation& interp, const PlanFragment& frag,
                           const RelationCandidate& rel, const KnowledgeBase& kb) {
    ApplyResult result;
    Interpretation next = interp;
    next.status = InterpStatus::in_progress;

    switch (rel.kind) {
        case RelationKind::introduction: {
            next.plans.push_back(plan_from_fragment(frag, kb));
            break;
        }
        case RelationKind::elaboration: {
            if (!rel.topic || *rel.topic < 0 ||
                *rel.topic >= static_cast<int>(next.plans.size())) {
                return result;
            }
            UnifyResult merged = unify(next.plans[*rel.topic], frag, kb);
            if (merged.status != UnifyStatus::merged) return result;
            next.plans[*rel.topic] = std::move(merged.plan);
            break;
        }
        case RelationKind::correction: {
            if (!rel.topic || *rel.topic < 0 ||
                *rel.topic >= static_cast<int>(next.plans.size())) {
                return result;
            }
            Plan& target = next.plans[*rel.topic];
            auto op = resolve_operator(target.op, frag.op, kb);
            if (!op) return result;
            Plan corrected = target;
            corrected.op = *op;
            for (const auto& [name, incoming] : frag.bindings) {
                auto it = corrected.params.find(name);
                if (it == corrected.params.end()) {
                    corrected.params[name] = incoming;
                    continue;
                }
                const MergeResult m = merge_params(it->second, incoming);
                // The whole point of a correction: the new statement wins.
                it->second = m.status == MergeStatus::merged ? m.param : incoming;
            }
            add_origin(corrected, frag.statement);
            pad_declared_params(corrected, kb);
            target = std::move(corrected);
            break;
        }
    }

    next.relations.push_back(rel);
    result.valid = true;
    result.interp = std::move(next);
    return result;
}

// ---------------------------------------------------------------------------
// combine
// ---------------------------------------------------------------------------

namespace {

// Two results are the same reading when their plans carry identical bindings
// and each operator pair is equal or related by specialization.
bool equivalent_plans(const Plan& a, const Plan& b, const KnowledgeBase& kb) {
    if (!kb.related(a.op, b.op)) return false;
    if (a.params.size() != b.params.size()) return false;
    auto ia = a.params.begin();
    auto ib = b.params.begin();
    for (; ia != a.params.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (ia->second.tag.kind != ib->second.tag.kind) return false;
        if (ia->second.value != ib->second.value) return false;
    }
    return true;
}

bool equivalent_interps(const Interpretation& a, const Interpretation& b,
                        const KnowledgeBase& kb) {
    if (a.plans.size() != b.plans.size()) return false;
    for (std::size_t i = 0; i < a.plans.size(); ++i) {
        if (!equivalent_plans(a.plans[i], b.plans[i], kb)) return false;
    }
    return true;
}

void coalesce_into(std::vector<Interpretation>& out, Interpretation candidate,
                   const KnowledgeBase& kb) {
    for (auto& kept : out) {
        if (!equivalent_interps(kept, candidate, kb)) continue;
        kept.probability += candidate.probability;
        for (std::size_t i = 0; i < kept.plans.size(); ++i) {
            // Keep the more specific operator for each merged plan.
            if (kept.plans[i].op != candidate.plans[i].op &&
                kb.specializes(candidate.plans[i].op, kept.plans[i].op)) {
                kept.plans[i].op = candidate.plans[i].op;
            }
            for (int origin : candidate.plans[i].origin_statements) {
                add_origin(kept.plans[i], origin);
            }
        }
        return;
    }
    out.push_back(std::move(candidate));
}

}  // namespace

std::vector<Interpretation> combine(const std::vector<Interpretation>& live,
                                    const std::vector<PlanFragment>& frags, const CueSet& cues,
                                    const KnowledgeBase& kb) {
    static const Interpretation empty_seed = [] {
        Interpretation seed;
        seed.probability = 1.0;
        return seed;
    }();
    const std::vector<Interpretation>& base =
        live.empty() ? std::vector<Interpretation>{empty_seed} : live;

    std::vector<Interpretation> out;
    for (const auto& interp : base) {
        for (const auto& frag : frags) {
            for (const auto& rel : relation_candidates(interp, frag, cues, kb)) {
                ApplyResult applied = apply_relation(interp, frag, rel, kb);
                if (!applied.valid) continue;
                applied.interp.probability =
                    interp.probability * frag.probability * rel.probability;
                coalesce_into(out, std::move(applied.interp), kb);
            }
        }
    }
    if (out.empty()) {
        throw EmptySetError("statement admits no valid (interpretation, relation) candidate");
    }
    double total = 0.0;
    for (const auto& interp : out) total += interp.probability;
    for (auto& interp : out) interp.probability /= total;
    return out;
}

std::vector<Interpretation> normalize_and_prune(std::vector<Interpretation> set,
                                                double threshold) {
    if (set.empty()) return set;
    double total = 0.0;
    for (const auto& interp : set) total += interp.probability;
    if (total <= 0.0) {
        throw std::invalid_argument("cannot normalize an all-zero probability set");
    }
    for (auto& interp : set) interp.probability /= total;

    double max_p = 0.0;
    for (const auto& interp : set) max_p = std::max(max_p, interp.probability);

    std::vector<Interpretation> kept;
    kept.reserve(set.size());
    for (auto& interp : set) {
        if (interp.probability >= threshold * max_p) kept.push_back(std::move(interp));
    }
    double kept_total = 0.0;
    for (const auto& interp : kept) kept_total += interp.probability;
    for (auto& interp : kept) interp.probability /= kept_total;

    std::stable_sort(kept.begin(), kept.end(),
                     [](const Interpretation& a, const Interpretation& b) {
                         return a.probability > b.probability;
                     });
    return kept;
}

}  // namespace planrec
