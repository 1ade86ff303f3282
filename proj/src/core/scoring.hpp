#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/direct.hpp"
#include "core/knowledge.hpp"

namespace planrec {

// Information content of one parameter: log2(strength / cardinality).
// Zero for an exact, directly stated value; negative otherwise.
double ic_param(const ParamValue& value, const StrengthTag& tag);

// Sum over the required parameters of every plan.
double ic_interpretation(const Interpretation& interp, const KnowledgeBase& kb);

struct ICParamEntry {
    std::size_t plan_index = 0;
    std::string param;
    double ic = 0.0;
    bool required = false;
};

struct ICReport {
    std::vector<ICParamEntry> params;  // required parameters only
    std::vector<double> plan_totals;
    double total = 0.0;
    std::optional<double> icnorm_used;
};

ICReport make_ic_report(const Interpretation& interp, const KnowledgeBase& kb);

// Shared normalization constant for the probability update. min mode takes
// the worst (all-undefined) content of any plan structure in the set; sum
// mode adds the actual contents. Empty optional marks the degenerate case
// (norm would be zero), in which the update is the identity.
std::optional<double> icnorm(const std::vector<Interpretation>& set, const KnowledgeBase& kb,
                             IcNormMode mode);

// P(I) <- P(I) * (1 - IC(I)/ICNORM), then renormalize.
std::vector<Interpretation> update_probabilities(std::vector<Interpretation> set,
                                                 const KnowledgeBase& kb, IcNormMode mode);

// complete: zero information content; stalled: saturation finished without
// reaching it; in_progress otherwise.
InterpStatus completion_check(const Interpretation& interp, const KnowledgeBase& kb);

}  // namespace planrec
