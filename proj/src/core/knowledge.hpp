#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/values.hpp"

namespace planrec {

// ---------------------------------------------------------------------------
// Domains and operators
// ---------------------------------------------------------------------------

// A parameter domain: either an enumerated symbol space or an integer range
// with a unit. Cardinality is what information content divides by.
struct DomainDecl {
    std::string name;
    bool symbolic = true;
    std::vector<std::string> values;  // symbolic domains
    std::int64_t lo = 0;              // integer domains
    std::int64_t hi = 0;
    std::string unit;

    std::int64_t cardinality() const {
        return symbolic ? static_cast<std::int64_t>(values.size()) : hi - lo + 1;
    }
};

struct ParamDecl {
    std::string name;
    std::string domain;
    bool required = false;
};

// A predicate pattern inside an operator definition. `args` maps the
// predicate's argument names onto the operator's parameter names.
struct PredPattern {
    std::string predicate;
    std::map<std::string, std::string> args;
};

struct Operator {
    std::string name;
    std::vector<ParamDecl> params;
    std::vector<PredPattern> preconditions;
    std::vector<PredPattern> effects;
    std::vector<std::string> body;

    const ParamDecl* find_param(const std::string& param_name) const;
};

// ---------------------------------------------------------------------------
// Indirect-inference rules
// ---------------------------------------------------------------------------

enum class PlanRef { self_plan, prev, next, first, last };

const char* to_string(PlanRef ref);
std::optional<PlanRef> plan_ref_from_string(const std::string& name);

enum class RuleScope { each_plan, first_plan, last_plan };

enum class Requirement { defined, undefined, exact };

struct RuleCondition {
    PlanRef on = PlanRef::self_plan;
    std::string param;
    Requirement require = Requirement::defined;
};

struct ParamSlot {
    PlanRef on = PlanRef::self_plan;
    std::string param;
};

// Value expressions a rule conclusion can evaluate. Tables are inlined so
// rules stay self-contained in the KB file.
struct ValueExpr {
    enum class Kind { constant, copy, shift, lookup, add_lookup } kind = Kind::constant;
    ParamValue constant;                        // constant
    ParamSlot source;                           // copy / shift / add_lookup base
    std::int64_t shift_lo = 0;                  // shift
    std::int64_t shift_hi = 0;
    ParamSlot row;                              // lookup / add_lookup
    ParamSlot col;
    std::map<std::string, std::string> symbol_table;   // lookup: "row|col" -> symbol
    std::map<std::string, std::int64_t> offset_table;  // add_lookup: "row|col" -> offset
};

struct IndirectRule {
    std::string name;
    StrengthKind source = StrengthKind::common_sense;
    RuleScope scope = RuleScope::each_plan;
    std::vector<std::string> operators;  // empty = any operator
    std::vector<RuleCondition> conditions;
    std::string target_param;
    ValueExpr value;
};

// ---------------------------------------------------------------------------
// Engine configuration
// ---------------------------------------------------------------------------

struct RuleMassTriple {
    double precondition = 1.0 / 3.0;
    double effect = 1.0 / 3.0;
    double body = 1.0 / 3.0;
};

enum class IcNormMode { min, sum };

struct EngineConfig {
    RuleMassTriple rule_priors;
    std::map<std::string, RuleMassTriple> meta_bias;
    std::map<StrengthKind, double> strengths;
    // Hook for per-operator prior bias on fragment probabilities; ships empty.
    std::map<std::string, double> operator_prior_bias;
    double c_intro = 0.15;
    double elaboration_decay = 0.5;   // lambda
    double cue_boost = 3.0;           // beta
    double digression_damping = 0.3;  // delta
    double threshold_direct = 0.5;
    double threshold_indirect = 0.7;
    IcNormMode icnorm_mode = IcNormMode::min;

    static EngineConfig defaults();

    double strength(StrengthKind kind) const;
    StrengthTag tag(StrengthKind kind) const;
    const RuleMassTriple& masses_for_meta(const std::optional<std::string>& meta) const;
};

// ---------------------------------------------------------------------------
// Knowledge base
// ---------------------------------------------------------------------------

struct Diagnostic {
    std::string code;    // e.g. "duplicate-operator", "unknown-domain"
    std::string entity;  // offending operator/rule/param name
    std::string message;
};

class KnowledgeBase {
public:
    std::vector<Operator> operators;
    std::vector<IndirectRule> rules;
    std::map<std::string, DomainDecl> domains;
    EngineConfig config;

    const Operator* find_operator(const std::string& name) const;
    const DomainDecl* find_domain(const std::string& name) const;

    // True when `specific` is `general` or appears in its transitive body.
    bool specializes(const std::string& specific, const std::string& general) const;
    bool related(const std::string& a, const std::string& b) const {
        return specializes(a, b) || specializes(b, a);
    }

    // An Unbound value sized to the parameter's declared domain.
    ParamValue undefined_value(const ParamDecl& decl) const;

    // Checks a transcript-supplied value against the declared domain
    // (symbols are members, intervals fit the range and unit).
    bool value_fits_domain(const ParamValue& value, const std::string& domain_name) const;

    void rebuild_indexes();

private:
    std::map<std::string, std::size_t> operator_index_;
    std::map<std::string, std::set<std::string>> body_closure_;
};

// Parsing and validation. load_kb throws ParseError / ValidationError with
// the offending entity named; validate_kb reports without throwing.
KnowledgeBase load_kb(const std::string& path);
KnowledgeBase load_kb_json(const nlohmann::json& doc);
std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb);
nlohmann::json kb_to_json(const KnowledgeBase& kb);

}  // namespace planrec
