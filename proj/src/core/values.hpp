#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace planrec {

// Reliability ranking of the information source behind a parameter value.
// user_statement is always the strongest; undefined is the floor used for
// parameters nobody has constrained yet.
enum class StrengthKind {
    user_statement,
    domain_knowledge,
    domain_assumption,
    user_model,
    common_sense,
    undefined,
};

const char* to_string(StrengthKind kind);
std::optional<StrengthKind> strength_kind_from_string(const std::string& name);

struct StrengthTag {
    StrengthKind kind = StrengthKind::undefined;
    double strength = 0.0;  // in (0,1]
};

// A finite set of symbolic constants, kept sorted and unique.
struct SymbolSet {
    std::vector<std::string> symbols;
};

// Closed integer interval with a declared unit ("day", "minute").
struct IntInterval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::string unit;
};

// Placeholder for a parameter nobody has constrained; remembers how many
// values its domain admits so information content stays computable.
struct Unbound {
    std::int64_t domain_size = 1;
};

class ParamValue {
public:
    ParamValue() : repr_(Unbound{1}) {}

    static ParamValue symbols(std::vector<std::string> values);
    static ParamValue interval(std::int64_t lo, std::int64_t hi, std::string unit);
    static ParamValue undefined(std::int64_t domain_size);

    bool is_defined() const { return !std::holds_alternative<Unbound>(repr_); }
    bool is_symbols() const { return std::holds_alternative<SymbolSet>(repr_); }
    bool is_interval() const { return std::holds_alternative<IntInterval>(repr_); }
    bool is_exact() const { return is_defined() && cardinality() == 1; }

    std::int64_t cardinality() const;

    const SymbolSet& as_symbols() const { return std::get<SymbolSet>(repr_); }
    const IntInterval& as_interval() const { return std::get<IntInterval>(repr_); }
    const Unbound& as_undefined() const { return std::get<Unbound>(repr_); }

    // Only the single symbol / single point, when exact.
    std::optional<std::string> exact_symbol() const;
    std::optional<std::int64_t> exact_point() const;

    bool operator==(const ParamValue& other) const;
    bool operator!=(const ParamValue& other) const { return !(*this == other); }

    std::string to_display() const;

private:
    std::variant<SymbolSet, IntInterval, Unbound> repr_;
};

// Intersection of two defined values of the same shape; nullopt when the
// shapes are incompatible or the intersection is empty.
std::optional<ParamValue> intersect(const ParamValue& a, const ParamValue& b);

struct BoundParam {
    ParamValue value;
    StrengthTag tag;
};

enum class MergeStatus { merged, conflict };

struct MergeResult {
    MergeStatus status = MergeStatus::conflict;
    BoundParam param;
};

// Merge two bindings of one parameter. Equal-strength sides intersect (empty
// intersection is a conflict); otherwise the stronger side wins outright.
MergeResult merge_params(const BoundParam& a, const BoundParam& b);

}  // namespace planrec
