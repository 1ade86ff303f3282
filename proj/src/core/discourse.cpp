#include "core/discourse.hpp"

#include <cmath>

#include "core/direct.hpp"

namespace planrec {

const char* to_string(RelationKind kind) {
    switch (kind) {
        case RelationKind::elaboration: return "elaboration";
        case RelationKind::introduction: return "introduction";
        case RelationKind::correction: return "correction";
    }
    return "introduction";
}

namespace {

constexpr const char* kDigressName = "DIGRESS";
constexpr const char* kCorrectName = "CORRECT";
constexpr const char* kTopicPrefix = "TOPIC:";

}  // namespace

CueSet detect_cues(const Predicate& pred) {
    CueSet cues = pred.cues;
    if (pred.name == kDigressName) cues.digress = true;
    if (pred.name == kCorrectName) cues.correct = true;
    return cues;
}

bool is_cue_only(const Predicate& pred) {
    return pred.name == kDigressName || pred.name == kCorrectName;
}

std::vector<RelationCandidate> relation_candidates(const Interpretation& interp,
                                                   const PlanFragment& frag, const CueSet& cues,
                                                   const KnowledgeBase& kb) {
    const EngineConfig& cfg = kb.config;
    std::vector<RelationCandidate> raw;

    const int n = static_cast<int>(interp.plans.size());
    if (n == 0) {
        return {RelationCandidate{RelationKind::introduction, std::nullopt, 1.0}};
    }

    auto topic_boost = [&](int topic) {
        return (cues.topic && *cues.topic == topic) ? cfg.cue_boost : 1.0;
    };

    // Elaborations, most recent topic first.
    for (int d = 0; d < n; ++d) {
        const int topic = n - 1 - d;
        const UnifyResult merged = unify(interp.plans[topic], frag, kb);
        if (merged.status != UnifyStatus::merged) continue;
        double weight = std::pow(cfg.elaboration_decay, d);
        if (d == 0 && cues.digress) weight *= cfg.digression_damping;
        weight *= topic_boost(topic);
        if (weight > 0.0) {
            raw.push_back({RelationKind::elaboration, topic, weight});
        }
    }

    // Corrections only when the statement carries a correction cue; the
    // target must at least be about the same kind of action.
    if (cues.correct) {
        for (int d = 0; d < n; ++d) {
            const int topic = n - 1 - d;
            const UnifyResult merged = unify(interp.plans[topic], frag, kb);
            if (merged.status == UnifyStatus::unrelated) continue;
            const double weight =
                cfg.cue_boost * std::pow(cfg.elaboration_decay, d) * topic_boost(topic);
            raw.push_back({RelationKind::correction, topic, weight});
        }
    }

    raw.push_back({RelationKind::introduction, std::nullopt, cfg.c_intro});

    double total = 0.0;
    for (const auto& c : raw) total += c.probability;
    for (auto& c : raw) c.probability /= total;
    return raw;
}

}  // namespace planrec
