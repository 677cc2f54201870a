#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hyperad/types.hpp"

namespace hyperad {

enum class EdgeKind { Op, Eval, Copy, Discard, Box };

/// Edge label. Constants are nullary `const` operations carrying their value.
struct Label {
    EdgeKind kind = EdgeKind::Op;
    std::string name;
    double value = 0.0;

    static Label op(std::string name) { return {EdgeKind::Op, std::move(name), 0.0}; }
    static Label constant(double v) { return {EdgeKind::Op, "const", v}; }
    static Label eval() { return {EdgeKind::Eval, "", 0.0}; }
    static Label copy() { return {EdgeKind::Copy, "", 0.0}; }
    static Label discard() { return {EdgeKind::Discard, "", 0.0}; }
    static Label box() { return {EdgeKind::Box, "", 0.0}; }

    bool is_constant() const { return kind == EdgeKind::Op && name == "const"; }

    /// Stable textual form; also the primary key of the canonical edge order.
    std::string to_string() const;

    friend bool operator==(const Label& a, const Label& b) {
        return a.kind == b.kind && a.name == b.name && a.value == b.value;
    }
};

/// Parses the textual form produced by `Label::to_string`.
Label parse_label(const std::string& text);

/// Shortest round-trip decimal rendering of a double.
std::string format_real(double v);

/// Runtime value of a first-order wire: a real, or a bundle of values. The
/// empty bundle is the additive zero of every bundle shape.
struct Value {
    std::variant<double, std::vector<Value>> data;

    Value() : data(0.0) {}
    Value(double d) : data(d) {}  // NOLINT(google-explicit-constructor)
    explicit Value(std::vector<Value> b) : data(std::move(b)) {}

    bool is_real() const { return std::holds_alternative<double>(data); }
    double real() const { return std::get<double>(data); }
    const std::vector<Value>& bundle() const { return std::get<std::vector<Value>>(data); }
};

Value add_values(const Value& a, const Value& b);
Value zero_of(const Type& t);

/// The registered primitive signature. Besides the real primitives
/// (`const`, `add`, `sub`, `mul`, `neg`, `sin`, `cos`, `exp`) it holds the
/// bundle operations used by adjoints: `pack`, `unpack`, `badd`, `bzero`.
class Signature {
public:
    struct Entry {
        TypeList operands;
        TypeList results;
        bool variadic = false;
    };

    static const Signature& builtin();

    bool contains(const std::string& name) const { return entries_.count(name) != 0; }
    const Entry* find(const std::string& name) const;

    /// Checks an Op edge against the signature; returns a message on mismatch.
    std::optional<std::string> check(const Label& label, const TypeList& sources,
                                     const TypeList& targets) const;

    /// Result types of a fixed-arity op, or nullopt for unknown/variadic ops.
    std::optional<TypeList> results_of(const std::string& name) const;

    /// Evaluates an Op edge.
    std::vector<Value> evaluate(const Label& label, std::span<const Value> inputs,
                                const TypeList& target_types) const;

    /// Names of the real-valued primitives usable from the surface language.
    std::vector<std::string> unary_primitives() const { return {"sin", "cos", "exp", "neg"}; }

private:
    Signature();
    std::map<std::string, Entry> entries_;
};

}  // namespace hyperad
