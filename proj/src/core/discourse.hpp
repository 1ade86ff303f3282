#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/knowledge.hpp"
#include "core/values.hpp"

namespace planrec {

struct PlanFragment;
struct Interpretation;

// Cue evidence attached to a statement: digression and correction markers
// plus an optional pointer at an earlier topic (plan index).
struct CueSet {
    bool digress = false;
    bool correct = false;
    std::optional<int> topic;

    bool empty() const { return !digress && !correct && !topic; }
    void merge(const CueSet& other) {
        digress = digress || other.digress;
        correct = correct || other.correct;
        if (other.topic) topic = other.topic;
    }
};

// One parsed user statement as delivered by the upstream language front end.
struct Predicate {
    std::string name;
    std::map<std::string, ParamValue> args;  // always defined values
    std::optional<std::string> meta;         // WANT / CAN / MUST
    CueSet cues;
};

enum class RelationKind { elaboration, introduction, correction };

const char* to_string(RelationKind kind);

struct RelationCandidate {
    RelationKind kind = RelationKind::introduction;
    std::optional<int> topic;  // plan index; absent for introduction
    double probability = 0.0;
};

// Cue markers carried by the predicate itself; statement names DIGRESS and
// CORRECT act as standalone cue predicates.
CueSet detect_cues(const Predicate& pred);
bool is_cue_only(const Predicate& pred);

// Normalized distribution over the ways `frag` can attach to `interp`.
// Elaboration weight decays with topic distance and is gated on unification;
// introduction has a constant low weight; correction needs its cue.
std::vector<RelationCandidate> relation_candidates(const Interpretation& interp,
                                                   const PlanFragment& frag, const CueSet& cues,
                                                   const KnowledgeBase& kb);

}  // namespace planrec
