#include "core/values.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace planrec {

const char* to_string(StrengthKind kind) {
    switch (kind) {
        case StrengthKind::user_statement: return "user_statement";
        case StrengthKind::domain_knowledge: return "domain_knowledge";
        case StrengthKind::domain_assumption: return "domain_assumption";
        case StrengthKind::user_model: return "user_model";
        case StrengthKind::common_sense: return "common_sense";
        case StrengthKind::undefined: return "undefined";
    }
    return "undefined";
}

std::optional<StrengthKind> strength_kind_from_string(const std::string& name) {
    static const std::pair<const char*, StrengthKind> table[] = {
        {"user_statement", StrengthKind::user_statement},
        {"domain_knowledge", StrengthKind::domain_knowledge},
        {"domain_assumption", StrengthKind::domain_assumption},
        {"user_model", StrengthKind::user_model},
        {"common_sense", StrengthKind::common_sense},
        {"undefined", StrengthKind::undefined},
    };
    for (const auto& [key, kind] : table) {
        if (name == key) return kind;
    }
    return std::nullopt;
}

ParamValue ParamValue::symbols(std::vector<std::string> values) {
    if (values.empty()) {
        throw std::invalid_argument("symbol set must be non-empty");
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    ParamValue v;
    v.repr_ = SymbolSet{std::move(values)};
    return v;
}

ParamValue ParamValue::interval(std::int64_t lo, std::int64_t hi, std::string unit) {
    if (lo > hi) {
        throw std::invalid_argument("interval lower bound exceeds upper bound");
    }
    ParamValue v;
    v.repr_ = IntInterval{lo, hi, std::move(unit)};
    return v;
}

ParamValue ParamValue::undefined(std::int64_t domain_size) {
    if (domain_size < 1) {
        throw std::invalid_argument("undefined value needs a positive domain size");
    }
    ParamValue v;
    v.repr_ = Unbound{domain_size};
    return v;
}

std::int64_t ParamValue::cardinality() const {
    if (const auto* s = std::get_if<SymbolSet>(&repr_)) {
        return static_cast<std::int64_t>(s->symbols.size());
    }
    if (const auto* i = std::get_if<IntInterval>(&repr_)) {
        return i->hi - i->lo + 1;
    }
    return std::get<Unbound>(repr_).domain_size;
}

std::optional<std::string> ParamValue::exact_symbol() const {
    if (const auto* s = std::get_if<SymbolSet>(&repr_); s && s->symbols.size() == 1) {
        return s->symbols.front();
    }
    return std::nullopt;
}

std::optional<std::int64_t> ParamValue::exact_point() const {
    if (const auto* i = std::get_if<IntInterval>(&repr_); i && i->lo == i->hi) {
        return i->lo;
    }
    return std::nullopt;
}

bool ParamValue::operator==(const ParamValue& other) const {
    if (repr_.index() != other.repr_.index()) return false;
    if (const auto* s = std::get_if<SymbolSet>(&repr_)) {
        return s->symbols == other.as_symbols().symbols;
    }
    if (const auto* i = std::get_if<IntInterval>(&repr_)) {
        const auto& o = other.as_interval();
        return i->lo == o.lo && i->hi == o.hi && i->unit == o.unit;
    }
    return as_undefined().domain_size == other.as_undefined().domain_size;
}

std::string ParamValue::to_display() const {
    std::ostringstream out;
    if (const auto* s = std::get_if<SymbolSet>(&repr_)) {
        out << "{";
        for (std::size_t i = 0; i < s->symbols.size(); ++i) {
            if (i > 0) out << "|";
            out << s->symbols[i];
        }
        out << "}";
    } else if (const auto* i = std::get_if<IntInterval>(&repr_)) {
        if (i->lo == i->hi) {
            out << i->lo;
        } else {
            out << "[" << i->lo << ".." << i->hi << "]";
        }
    } else {
        out << "?";
    }
    return out.str();
}

std::optional<ParamValue> intersect(const ParamValue& a, const ParamValue& b) {
    if (!a.is_defined() || !b.is_defined()) return std::nullopt;
    if (a.is_symbols() && b.is_symbols()) {
        std::vector<std::string> common;
        std::set_intersection(a.as_symbols().symbols.begin(), a.as_symbols().symbols.end(),
                              b.as_symbols().symbols.begin(), b.as_symbols().symbols.end(),
                              std::back_inserter(common));
        if (common.empty()) return std::nullopt;
        return ParamValue::symbols(std::move(common));
    }
    if (a.is_interval() && b.is_interval()) {
        const auto& ia = a.as_interval();
        const auto& ib = b.as_interval();
        if (ia.unit != ib.unit) return std::nullopt;
        const std::int64_t lo = std::max(ia.lo, ib.lo);
        const std::int64_t hi = std::min(ia.hi, ib.hi);
        if (lo > hi) return std::nullopt;
        return ParamValue::interval(lo, hi, ia.unit);
    }
    return std::nullopt;
}

MergeResult merge_params(const BoundParam& a, const BoundParam& b) {
    if (a.tag.kind == b.tag.kind) {
        if (!a.value.is_defined()) return {MergeStatus::merged, b};
        if (!b.value.is_defined()) return {MergeStatus::merged, a};
        if (auto common = intersect(a.value, b.value)) {
            return {MergeStatus::merged, BoundParam{*common, a.tag}};
        }
        return {MergeStatus::conflict, a};
    }
    const BoundParam& strong = a.tag.strength >= b.tag.strength ? a : b;
    return {MergeStatus::merged, strong};
}

}  // namespace planrec
