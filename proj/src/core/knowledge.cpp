#include "core/knowledge.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace planrec {

using nlohmann::json;

const char* to_string(PlanRef ref) {
    switch (ref) {
        case PlanRef::self_plan: return "self";
        case PlanRef::prev: return "prev";
        case PlanRef::next: return "next";
        case PlanRef::first: return "first";
        case PlanRef::last: return "last";
    }
    return "self";
}

std::optional<PlanRef> plan_ref_from_string(const std::string& name) {
    if (name == "self") return PlanRef::self_plan;
    if (name == "prev") return PlanRef::prev;
    if (name == "next") return PlanRef::next;
    if (name == "first") return PlanRef::first;
    if (name == "last") return PlanRef::last;
    return std::nullopt;
}

const ParamDecl* Operator::find_param(const std::string& param_name) const {
    for (const auto& p : params) {
        if (p.name == param_name) return &p;
    }
    return nullptr;
}

EngineConfig EngineConfig::defaults() {
    EngineConfig cfg;
    cfg.strengths = {
        {StrengthKind::user_statement, 1.0},
        {StrengthKind::domain_knowledge, 0.85},
        {StrengthKind::domain_assumption, 0.7},
        {StrengthKind::user_model, 0.55},
        {StrengthKind::common_sense, 0.4},
        {StrengthKind::undefined, 0.1},
    };
    cfg.meta_bias = {
        {"WANT", RuleMassTriple{0.2, 0.6, 0.2}},
        {"CAN", RuleMassTriple{0.6, 0.2, 0.2}},
        {"MUST", RuleMassTriple{0.2, 0.6, 0.2}},
    };
    return cfg;
}

double EngineConfig::strength(StrengthKind kind) const {
    auto it = strengths.find(kind);
    return it == strengths.end() ? 0.1 : it->second;
}

StrengthTag EngineConfig::tag(StrengthKind kind) const {
    return StrengthTag{kind, strength(kind)};
}

const RuleMassTriple& EngineConfig::masses_for_meta(const std::optional<std::string>& meta) const {
    if (meta) {
        auto it = meta_bias.find(*meta);
        if (it != meta_bias.end()) return it->second;
    }
    return rule_priors;
}

const Operator* KnowledgeBase::find_operator(const std::string& name) const {
    auto it = operator_index_.find(name);
    return it == operator_index_.end() ? nullptr : &operators[it->second];
}

const DomainDecl* KnowledgeBase::find_domain(const std::string& name) const {
    auto it = domains.find(name);
    return it == domains.end() ? nullptr : &it->second;
}

bool KnowledgeBase::specializes(const std::string& specific, const std::string& general) const {
    if (specific == general) return true;
    auto it = body_closure_.find(general);
    return it != body_closure_.end() && it->second.count(specific) > 0;
}

ParamValue KnowledgeBase::undefined_value(const ParamDecl& decl) const {
    const DomainDecl* dom = find_domain(decl.domain);
    const std::int64_t size = dom ? dom->cardinality() : 1;
    return ParamValue::undefined(size > 0 ? size : 1);
}

bool KnowledgeBase::value_fits_domain(const ParamValue& value, const std::string& domain_name) const {
    const DomainDecl* dom = find_domain(domain_name);
    if (dom == nullptr) return false;
    if (!value.is_defined()) return true;
    if (dom->symbolic) {
        if (!value.is_symbols()) return false;
        for (const auto& s : value.as_symbols().symbols) {
            if (std::find(dom->values.begin(), dom->values.end(), s) == dom->values.end()) {
                return false;
            }
        }
        return true;
    }
    if (!value.is_interval()) return false;
    const auto& iv = value.as_interval();
    return iv.unit == dom->unit && iv.lo >= dom->lo && iv.hi <= dom->hi;
}

void KnowledgeBase::rebuild_indexes() {
    operator_index_.clear();
    for (std::size_t i = 0; i < operators.size(); ++i) {
        operator_index_.emplace(operators[i].name, i);
    }
    // Transitive body membership, robust to accidental cycles.
    body_closure_.clear();
    for (const auto& op : operators) {
        std::set<std::string> reached;
        std::vector<std::string> frontier(op.body.begin(), op.body.end());
        while (!frontier.empty()) {
            std::string current = std::move(frontier.back());
            frontier.pop_back();
            if (current == op.name || !reached.insert(current).second) continue;
            if (const Operator* sub = find_operator(current)) {
                frontier.insert(frontier.end(), sub->body.begin(), sub->body.end());
            }
        }
        body_closure_[op.name] = std::move(reached);
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    throw ParseError("kb: " + where + ": " + what);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        parse_fail(where, "missing numeric field '" + key + "'");
    }
    return obj[key].get<double>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        parse_fail(where, "missing string field '" + key + "'");
    }
    return obj[key].get<std::string>();
}

ParamValue parse_value_spec(const json& spec, const std::string& where) {
    if (!spec.is_object()) parse_fail(where, "value spec must be an object");
    if (spec.contains("set")) {
        if (!spec["set"].is_array() || spec["set"].empty()) {
            parse_fail(where, "'set' must be a non-empty array");
        }
        std::vector<std::string> symbols;
        for (const auto& item : spec["set"]) {
            if (!item.is_string()) parse_fail(where, "'set' entries must be strings");
            symbols.push_back(item.get<std::string>());
        }
        return ParamValue::symbols(std::move(symbols));
    }
    if (spec.contains("interval")) {
        const auto& iv = spec["interval"];
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number_integer() ||
            !iv[1].is_number_integer()) {
            parse_fail(where, "'interval' must be [lo, hi] integers");
        }
        const std::string unit = require_string(spec, "unit", where);
        if (unit != "day" && unit != "minute") {
            parse_fail(where, "unknown interval unit '" + unit + "'");
        }
        const std::int64_t lo = iv[0].get<std::int64_t>();
        const std::int64_t hi = iv[1].get<std::int64_t>();
        if (lo > hi) parse_fail(where, "interval lower bound exceeds upper bound");
        return ParamValue::interval(lo, hi, unit);
    }
    parse_fail(where, "value spec needs 'set' or 'interval'");
}

ParamSlot parse_slot(const json& obj, const std::string& where) {
    ParamSlot slot;
    const std::string on = obj.contains("on") ? require_string(obj, "on", where) : "self";
    auto ref = plan_ref_from_string(on);
    if (!ref) parse_fail(where, "unknown plan reference '" + on + "'");
    slot.on = *ref;
    slot.param = require_string(obj, "param", where);
    return slot;
}

ValueExpr parse_value_expr(const json& obj, const std::string& where) {
    ValueExpr expr;
    if (!obj.is_object()) parse_fail(where, "value expression must be an object");
    if (obj.contains("const")) {
        expr.kind = ValueExpr::Kind::constant;
        expr.constant = parse_value_spec(obj["const"], where + ".const");
        return expr;
    }
    if (obj.contains("copy")) {
        expr.kind = ValueExpr::Kind::copy;
        expr.source = parse_slot(obj["copy"], where + ".copy");
        return expr;
    }
    if (obj.contains("shift")) {
        const auto& sh = obj["shift"];
        expr.kind = ValueExpr::Kind::shift;
        if (!sh.contains("from")) parse_fail(where, "'shift' needs 'from'");
        expr.source = parse_slot(sh["from"], where + ".shift.from");
        expr.shift_lo = static_cast<std::int64_t>(require_number(sh, "lo", where + ".shift"));
        expr.shift_hi = static_cast<std::int64_t>(require_number(sh, "hi", where + ".shift"));
        if (expr.shift_lo > expr.shift_hi) parse_fail(where, "'shift' lo exceeds hi");
        return expr;
    }
    if (obj.contains("lookup")) {
        const auto& lk = obj["lookup"];
        expr.kind = ValueExpr::Kind::lookup;
        if (!lk.contains("row") || !lk.contains("col") || !lk.contains("table")) {
            parse_fail(where, "'lookup' needs row, col and table");
        }
        expr.row = parse_slot(lk["row"], where + ".lookup.row");
        expr.col = parse_slot(lk["col"], where + ".lookup.col");
        for (const auto& [key, value] : lk["table"].items()) {
            if (!value.is_string()) parse_fail(where, "lookup table values must be strings");
            expr.symbol_table[key] = value.get<std::string>();
        }
        return expr;
    }
    if (obj.contains("add_lookup")) {
        const auto& al = obj["add_lookup"];
        expr.kind = ValueExpr::Kind::add_lookup;
        if (!al.contains("base") || !al.contains("row") || !al.contains("col") ||
            !al.contains("table")) {
            parse_fail(where, "'add_lookup' needs base, row, col and table");
        }
        expr.source = parse_slot(al["base"], where + ".add_lookup.base");
        expr.row = parse_slot(al["row"], where + ".add_lookup.row");
        expr.col = parse_slot(al["col"], where + ".add_lookup.col");
        for (const auto& [key, value] : al["table"].items()) {
            if (!value.is_number_integer()) {
                parse_fail(where, "add_lookup table values must be integers");
            }
            expr.offset_table[key] = value.get<std::int64_t>();
        }
        return expr;
    }
    parse_fail(where, "unknown value expression");
}

RuleMassTriple parse_mass_triple(const json& obj, const std::string& where) {
    RuleMassTriple triple;
    triple.precondition = require_number(obj, "precondition", where);
    triple.effect = require_number(obj, "effect", where);
    triple.body = require_number(obj, "body", where);
    return triple;
}

PredPattern parse_pattern(const json& obj, const std::string& where) {
    PredPattern pattern;
    pattern.predicate = require_string(obj, "predicate", where);
    if (obj.contains("args")) {
        if (!obj["args"].is_object()) parse_fail(where, "'args' must be an object");
        for (const auto& [arg, param] : obj["args"].items()) {
            if (!param.is_string()) parse_fail(where, "'args' values must be parameter names");
            pattern.args[arg] = param.get<std::string>();
        }
    }
    return pattern;
}

EngineConfig parse_config(const json& obj) {
    EngineConfig cfg = EngineConfig::defaults();
    if (obj.is_null()) return cfg;
    if (!obj.is_object()) parse_fail("config", "must be an object");
    if (obj.contains("rule_priors")) {
        cfg.rule_priors = parse_mass_triple(obj["rule_priors"], "config.rule_priors");
    }
    if (obj.contains("meta_bias")) {
        cfg.meta_bias.clear();
        for (const auto& [meta, triple] : obj["meta_bias"].items()) {
            cfg.meta_bias[meta] = parse_mass_triple(triple, "config.meta_bias." + meta);
        }
    }
    if (obj.contains("strengths")) {
        for (const auto& [name, value] : obj["strengths"].items()) {
            auto kind = strength_kind_from_string(name);
            if (!kind) parse_fail("config.strengths", "unknown inference kind '" + name + "'");
            if (!value.is_number()) parse_fail("config.strengths", name + " must be a number");
            cfg.strengths[*kind] = value.get<double>();
        }
    }
    if (obj.contains("operator_prior_bias")) {
        for (const auto& [op, value] : obj["operator_prior_bias"].items()) {
            if (!value.is_number()) {
                parse_fail("config.operator_prior_bias", op + " must be a number");
            }
            cfg.operator_prior_bias[op] = value.get<double>();
        }
    }
    if (obj.contains("c_intro")) cfg.c_intro = require_number(obj, "c_intro", "config");
    if (obj.contains("elaboration_decay")) {
        cfg.elaboration_decay = require_number(obj, "elaboration_decay", "config");
    }
    if (obj.contains("cue_boost")) cfg.cue_boost = require_number(obj, "cue_boost", "config");
    if (obj.contains("digression_damping")) {
        cfg.digression_damping = require_number(obj, "digression_damping", "config");
    }
    if (obj.contains("threshold_direct")) {
        cfg.threshold_direct = require_number(obj, "threshold_direct", "config");
    }
    if (obj.contains("threshold_indirect")) {
        cfg.threshold_indirect = require_number(obj, "threshold_indirect", "config");
    }
    if (obj.contains("icnorm_mode")) {
        const std::string mode = require_string(obj, "icnorm_mode", "config");
        if (mode == "min") {
            cfg.icnorm_mode = IcNormMode::min;
        } else if (mode == "sum") {
            cfg.icnorm_mode = IcNormMode::sum;
        } else {
            parse_fail("config.icnorm_mode", "must be 'min' or 'sum'");
        }
    }
    return cfg;
}

}  // namespace

KnowledgeBase load_kb_json(const json& doc) {
    if (!doc.is_object()) parse_fail("document", "top level must be an object");
    KnowledgeBase kb;

    if (!doc.contains("domains") || !doc["domains"].is_object()) {
        parse_fail("domains", "missing 'domains' object");
    }
    for (const auto& [name, spec] : doc["domains"].items()) {
        DomainDecl dom;
        dom.name = name;
        if (spec.contains("values")) {
            dom.symbolic = true;
            if (!spec["values"].is_array() || spec["values"].empty()) {
                parse_fail("domains." + name, "'values' must be a non-empty array");
            }
            for (const auto& v : spec["values"]) {
                if (!v.is_string()) parse_fail("domains." + name, "values must be strings");
                dom.values.push_back(v.get<std::string>());
            }
        } else if (spec.contains("interval")) {
            dom.symbolic = false;
            const auto& iv = spec["interval"];
            if (!iv.is_array() || iv.size() != 2) {
                parse_fail("domains." + name, "'interval' must be [lo, hi]");
            }
            dom.lo = iv[0].get<std::int64_t>();
            dom.hi = iv[1].get<std::int64_t>();
            dom.unit = require_string(spec, "unit", "domains." + name);
            if (dom.lo > dom.hi) parse_fail("domains." + name, "empty interval domain");
        } else {
            parse_fail("domains." + name, "needs 'values' or 'interval'");
        }
        kb.domains[name] = std::move(dom);
    }

    if (!doc.contains("operators") || !doc["operators"].is_array()) {
        parse_fail("operators", "missing 'operators' array");
    }
    for (const auto& entry : doc["operators"]) {
        Operator op;
        op.name = require_string(entry, "name", "operators[]");
        const std::string where = "operator " + op.name;
        if (entry.contains("params")) {
            for (const auto& p : entry["params"]) {
                ParamDecl decl;
                decl.name = require_string(p, "name", where + ".params");
                decl.domain = require_string(p, "domain", where + ".params");
                decl.required = p.value("required", false);
                op.params.push_back(std::move(decl));
            }
        }
        if (entry.contains("preconditions")) {
            for (const auto& p : entry["preconditions"]) {
                op.preconditions.push_back(parse_pattern(p, where + ".preconditions"));
            }
        }
        if (entry.contains("effects")) {
            for (const auto& p : entry["effects"]) {
                op.effects.push_back(parse_pattern(p, where + ".effects"));
            }
        }
        if (entry.contains("body")) {
            for (const auto& b : entry["body"]) {
                if (!b.is_string()) parse_fail(where, "body entries must be operator names");
                op.body.push_back(b.get<std::string>());
            }
        }
        kb.operators.push_back(std::move(op));
    }

    if (doc.contains("rules")) {
        if (!doc["rules"].is_array()) parse_fail("rules", "'rules' must be an array");
        for (const auto& entry : doc["rules"]) {
            IndirectRule rule;
            rule.name = require_string(entry, "name", "rules[]");
            const std::string where = "rule " + rule.name;
            const std::string source = require_string(entry, "source", where);
            auto kind = strength_kind_from_string(source);
            if (!kind) parse_fail(where, "unknown source kind '" + source + "'");
            rule.source = *kind;
            const std::string scope = entry.value("scope", "each_plan");
            if (scope == "each_plan") {
                rule.scope = RuleScope::each_plan;
            } else if (scope == "first_plan") {
                rule.scope = RuleScope::first_plan;
            } else if (scope == "last_plan") {
                rule.scope = RuleScope::last_plan;
            } else {
                parse_fail(where, "unknown scope '" + scope + "'");
            }
            if (entry.contains("operators")) {
                for (const auto& o : entry["operators"]) {
                    rule.operators.push_back(o.get<std::string>());
                }
            }
            if (entry.contains("conditions")) {
                for (const auto& c : entry["conditions"]) {
                    RuleCondition cond;
                    const std::string on = c.value("on", "self");
                    auto ref = plan_ref_from_string(on);
                    if (!ref) parse_fail(where, "unknown plan reference '" + on + "'");
                    cond.on = *ref;
                    cond.param = require_string(c, "param", where + ".conditions");
                    const std::string req = c.value("require", "defined");
                    if (req == "defined") {
                        cond.require = Requirement::defined;
                    } else if (req == "undefined") {
                        cond.require = Requirement::undefined;
                    } else if (req == "exact") {
                        cond.require = Requirement::exact;
                    } else {
                        parse_fail(where, "unknown requirement '" + req + "'");
                    }
                    rule.conditions.push_back(std::move(cond));
                }
            }
            if (!entry.contains("set") || !entry["set"].is_object()) {
                parse_fail(where, "missing 'set' conclusion");
            }
            rule.target_param = require_string(entry["set"], "param", where + ".set");
            if (!entry["set"].contains("value")) parse_fail(where, "'set' needs 'value'");
            rule.value = parse_value_expr(entry["set"]["value"], where + ".set.value");
            kb.rules.push_back(std::move(rule));
        }
    }

    kb.config = parse_config(doc.contains("config") ? doc["config"] : json());
    kb.rebuild_indexes();

    auto diagnostics = validate_kb(kb);
    if (!diagnostics.empty()) {
        std::ostringstream out;
        out << "kb validation failed:";
        for (const auto& d : diagnostics) {
            out << "\n  [" << d.code << "] " << d.entity << ": " << d.message;
        }
        throw ValidationError(out.str());
    }
    return kb;
}

KnowledgeBase load_kb(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("kb: cannot open file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("kb: invalid JSON in '" + path + "': " + e.what());
    }
    return load_kb_json(doc);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

void check_patterns(const Operator& op, const std::vector<PredPattern>& patterns,
                    const char* section, std::vector<Diagnostic>& out) {
    for (const auto& pattern : patterns) {
        for (const auto& [arg, param] : pattern.args) {
            if (op.find_param(param) == nullptr) {
                out.push_back({"unknown-pattern-param", op.name,
                               std::string(section) + " pattern '" + pattern.predicate +
                                   "' binds argument '" + arg + "' to undeclared parameter '" +
                                   param + "'"});
            }
        }
    }
}

void check_slot(const IndirectRule& rule, const ParamSlot& slot, const KnowledgeBase& kb,
                std::vector<Diagnostic>& out) {
    bool known_somewhere = false;
    for (const auto& op : kb.operators) {
        if (op.find_param(slot.param) != nullptr) {
            known_somewhere = true;
            break;
        }
    }
    if (!known_somewhere) {
        out.push_back({"unknown-rule-param", rule.name,
                       "references parameter '" + slot.param + "' declared by no operator"});
    }
}

}  // namespace

std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb) {
    std::vector<Diagnostic> out;

    std::set<std::string> seen;
    for (const auto& op : kb.operators) {
        if (!seen.insert(op.name).second) {
            out.push_back({"duplicate-operator", op.name, "operator name declared twice"});
        }
    }

    for (const auto& [name, dom] : kb.domains) {
        if (dom.cardinality() < 1) {
            out.push_back({"empty-domain", name, "domain has no values"});
        }
    }

    for (const auto& op : kb.operators) {
        std::set<std::string> param_names;
        for (const auto& p : op.params) {
            if (!param_names.insert(p.name).second) {
                out.push_back({"duplicate-param", op.name,
                               "parameter '" + p.name + "' declared twice"});
            }
            if (kb.find_domain(p.domain) == nullptr) {
                out.push_back({"unknown-domain", op.name,
                               "parameter '" + p.name + "' references undeclared domain '" +
                                   p.domain + "'"});
            }
        }
        check_patterns(op, op.preconditions, "precondition", out);
        check_patterns(op, op.effects, "effect", out);
        for (const auto& sub : op.body) {
            if (kb.find_operator(sub) == nullptr) {
                out.push_back({"dangling-body-reference", op.name,
                               "body names unknown operator '" + sub + "'"});
            }
        }
    }

    for (const auto& rule : kb.rules) {
        if (rule.source == StrengthKind::user_statement ||
            rule.source == StrengthKind::undefined) {
            out.push_back({"bad-rule-source", rule.name,
                           "rule source must be one of the four indirect kinds"});
        }
        for (const auto& op_name : rule.operators) {
            if (kb.find_operator(op_name) == nullptr) {
                out.push_back({"unknown-rule-operator", rule.name,
                               "filter names unknown operator '" + op_name + "'"});
            }
        }
        check_slot(rule, ParamSlot{PlanRef::self_plan, rule.target_param}, kb, out);
        for (const auto& cond : rule.conditions) {
            check_slot(rule, ParamSlot{cond.on, cond.param}, kb, out);
        }
        if (rule.value.kind == ValueExpr::Kind::copy ||
            rule.value.kind == ValueExpr::Kind::shift ||
            rule.value.kind == ValueExpr::Kind::add_lookup) {
            check_slot(rule, rule.value.source, kb, out);
        }
        if (rule.value.kind == ValueExpr::Kind::lookup ||
            rule.value.kind == ValueExpr::Kind::add_lookup) {
            check_slot(rule, rule.value.row, kb, out);
            check_slot(rule, rule.value.col, kb, out);
        }
    }

    // Strength ordering: statements strongest, then the listed kinds strictly
    // decreasing, undefined strictly positive at the bottom.
    const EngineConfig& cfg = kb.config;
    const StrengthKind order[] = {
        StrengthKind::user_statement,   StrengthKind::domain_knowledge,
        StrengthKind::domain_assumption, StrengthKind::user_model,
        StrengthKind::common_sense,     StrengthKind::undefined,
    };
    if (std::abs(cfg.strength(StrengthKind::user_statement) - 1.0) > 1e-12) {
        out.push_back({"bad-strength", "user_statement", "strength must be exactly 1.0"});
    }
    for (std::size_t i = 0; i + 1 < std::size(order); ++i) {
        if (cfg.strength(order[i]) <= cfg.strength(order[i + 1])) {
            out.push_back({"strength-order", to_string(order[i + 1]),
                           std::string("strength must be strictly below ") +
                               to_string(order[i])});
        }
    }
    if (cfg.strength(StrengthKind::undefined) <= 0.0) {
        out.push_back({"bad-strength", "undefined", "strength must be positive"});
    }

    auto check_triple = [&out](const RuleMassTriple& t, const std::string& entity) {
        if (t.precondition < 0 || t.effect < 0 || t.body < 0) {
            out.push_back({"bad-rule-mass", entity, "rule masses must be non-negative"});
        }
        if (std::abs(t.precondition + t.effect + t.body - 1.0) > 1e-9) {
            out.push_back({"bad-rule-mass", entity, "rule masses must sum to 1"});
        }
    };
    check_triple(cfg.rule_priors, "rule_priors");
    for (const auto& [meta, triple] : cfg.meta_bias) {
        check_triple(triple, "meta_bias." + meta);
    }

    auto check_unit_range = [&out](double v, const std::string& entity, bool open_top) {
        const bool bad = open_top ? (v <= 0.0 || v >= 1.0) : (v < 0.0 || v > 1.0);
        if (bad) {
            out.push_back({"out-of-range", entity,
                           open_top ? "must lie in (0,1)" : "must lie in [0,1]"});
        }
    };
    check_unit_range(cfg.c_intro, "c_intro", true);
    check_unit_range(cfg.elaboration_decay, "elaboration_decay", true);
    check_unit_range(cfg.digression_damping, "digression_damping", true);
    check_unit_range(cfg.threshold_direct, "threshold_direct", false);
    check_unit_range(cfg.threshold_indirect, "threshold_indirect", false);
    if (cfg.cue_boost <= 1.0) {
        out.push_back({"out-of-range", "cue_boost", "must be greater than 1"});
    }
    for (const auto& [op, bias] : cfg.operator_prior_bias) {
        if (bias <= 0.0) {
            out.push_back({"out-of-range", "operator_prior_bias." + op, "must be positive"});
        }
        if (kb.find_operator(op) == nullptr) {
            out.push_back({"unknown-rule-operator", "operator_prior_bias." + op,
                           "bias names unknown operator"});
        }
    }

    return out;
}

// ---------------------------------------------------------------------------
// Serialization (round-trip support)
// ---------------------------------------------------------------------------

namespace {

json value_spec_to_json(const ParamValue& value) {
    json out;
    if (value.is_symbols()) {
        out["set"] = value.as_symbols().symbols;
    } else if (value.is_interval()) {
        const auto& iv = value.as_interval();
        out["interval"] = {iv.lo, iv.hi};
        out["unit"] = iv.unit;
    }
    return out;
}

json slot_to_json(const ParamSlot& slot) {
    return json{{"on", to_string(slot.on)}, {"param", slot.param}};
}

json pattern_to_json(const PredPattern& pattern) {
    json args = json::object();
    for (const auto& [arg, param] : pattern.args) args[arg] = param;
    return json{{"predicate", pattern.predicate}, {"args", std::move(args)}};
}

json triple_to_json(const RuleMassTriple& t) {
    return json{{"precondition", t.precondition}, {"effect", t.effect}, {"body", t.body}};
}

}  // namespace

json kb_to_json(const KnowledgeBase& kb) {
    json doc;

    json domains = json::object();
    for (const auto& [name, dom] : kb.domains) {
        json d;
        if (dom.symbolic) {
            d["values"] = dom.values;
        } else {
            d["interval"] = {dom.lo, dom.hi};
            d["unit"] = dom.unit;
        }
        domains[name] = std::move(d);
    }
    doc["domains"] = std::move(domains);

    json operators = json::array();
    for (const auto& op : kb.operators) {
        json o;
        o["name"] = op.name;
        json params = json::array();
        for (const auto& p : op.params) {
            params.push_back({{"name", p.name}, {"domain", p.domain}, {"required", p.required}});
        }
        o["params"] = std::move(params);
        json pre = json::array();
        for (const auto& p : op.preconditions) pre.push_back(pattern_to_json(p));
        o["preconditions"] = std::move(pre);
        json eff = json::array();
        for (const auto& p : op.effects) eff.push_back(pattern_to_json(p));
        o["effects"] = std::move(eff);
        o["body"] = op.body;
        operators.push_back(std::move(o));
    }
    doc["operators"] = std::move(operators);

    json rules = json::array();
    for (const auto& rule : kb.rules) {
        json r;
        r["name"] = rule.name;
        r["source"] = to_string(rule.source);
        switch (rule.scope) {
            case RuleScope::each_plan: r["scope"] = "each_plan"; break;
            case RuleScope::first_plan: r["scope"] = "first_plan"; break;
            case RuleScope::last_plan: r["scope"] = "last_plan"; break;
        }
        r["operators"] = rule.operators;
        json conditions = json::array();
        for (const auto& cond : rule.conditions) {
            const char* req = cond.require == Requirement::defined    ? "defined"
                              : cond.require == Requirement::undefined ? "undefined"
                                                                       : "exact";
            conditions.push_back(
                {{"on", to_string(cond.on)}, {"param", cond.param}, {"require", req}});
        }
        r["conditions"] = std::move(conditions);
        json value;
        switch (rule.value.kind) {
            case ValueExpr::Kind::constant:
                value["const"] = value_spec_to_json(rule.value.constant);
                break;
            case ValueExpr::Kind::copy:
                value["copy"] = slot_to_json(rule.value.source);
                break;
            case ValueExpr::Kind::shift:
                value["shift"] = {{"from", slot_to_json(rule.value.source)},
                                  {"lo", rule.value.shift_lo},
                                  {"hi", rule.value.shift_hi}};
                break;
            case ValueExpr::Kind::lookup: {
                json table = json::object();
                for (const auto& [k, v] : rule.value.symbol_table) table[k] = v;
                value["lookup"] = {{"row", slot_to_json(rule.value.row)},
                                   {"col", slot_to_json(rule.value.col)},
                                   {"table", std::move(table)}};
                break;
            }
            case ValueExpr::Kind::add_lookup: {
                json table = json::object();
                for (const auto& [k, v] : rule.value.offset_table) table[k] = v;
                value["add_lookup"] = {{"base", slot_to_json(rule.value.source)},
                                       {"row", slot_to_json(rule.value.row)},
                                       {"col", slot_to_json(rule.value.col)},
                                       {"table", std::move(table)}};
                break;
            }
        }
        r["set"] = {{"param", rule.target_param}, {"value", std::move(value)}};
        rules.push_back(std::move(r));
    }
    doc["rules"] = std::move(rules);

    json cfg;
    cfg["rule_priors"] = triple_to_json(kb.config.rule_priors);
    json bias = json::object();
    for (const auto& [meta, triple] : kb.config.meta_bias) bias[meta] = triple_to_json(triple);
    cfg["meta_bias"] = std::move(bias);
    json strengths = json::object();
    for (const auto& [kind, value] : kb.config.strengths) strengths[to_string(kind)] = value;
    cfg["strengths"] = std::move(strengths);
    if (!kb.config.operator_prior_bias.empty()) {
        json prior = json::object();
        for (const auto& [op, value] : kb.config.operator_prior_bias) prior[op] = value;
        cfg["operator_prior_bias"] = std::move(prior);
    }
    cfg["c_intro"] = kb.config.c_intro;
    cfg["elaboration_decay"] = kb.config.elaboration_decay;
    cfg["cue_boost"] = kb.config.cue_boost;
    cfg["digression_damping"] = kb.config.digression_damping;
    cfg["threshold_direct"] = kb.config.threshold_direct;
    cfg["threshold_indirect"] = kb.config.threshold_indirect;
    cfg["icnorm_mode"] = kb.config.icnorm_mode == IcNormMode::min ? "min" : "sum";
    doc["config"] = std::move(cfg);

    return doc;
}

}  // namespace planrec
