#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperad {

class Type;
using TypeList = std::vector<Type>;

/// Simple types of wires. Tensors are strict: a tensor is a flat list of
/// non-tensor components, a one-element tensor collapses to its component and
/// the empty tensor is the unit I. Vertices only ever carry non-tensor types.
///
/// `Bundle` is the ground type carrying the sensitivity of a closure (the
/// packed cotangents of its captured wires); it only appears in adjoint nets.
class Type {
public:
    enum class Kind { Real, Bundle, Tensor, Arrow };

    Type() : kind_(Kind::Real) {}

    static Type real() { return Type(Kind::Real, {}, {}); }
    static Type bundle() { return Type(Kind::Bundle, {}, {}); }
    static Type unit() { return Type(Kind::Tensor, {}, {}); }
    static Type tensor(const TypeList& components);
    static Type arrow(const TypeList& operands, const TypeList& results);

    Kind kind() const { return kind_; }
    bool is_real() const { return kind_ == Kind::Real; }
    bool is_bundle() const { return kind_ == Kind::Bundle; }
    bool is_tensor() const { return kind_ == Kind::Tensor; }
    bool is_arrow() const { return kind_ == Kind::Arrow; }

    /// Tensor components, or arrow operands.
    const TypeList& operands() const { return operands_; }
    /// Arrow results.
    const TypeList& results() const { return results_; }

    std::string to_string() const;

    friend bool operator==(const Type& a, const Type& b);
    friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

private:
    Type(Kind k, TypeList ops, TypeList res)
        : kind_(k), operands_(std::move(ops)), results_(std::move(res)) {}

    Kind kind_;
    TypeList operands_;
    TypeList results_;
};

/// Flattens a type into its wire list: tensors expand, everything else is a
/// single wire.
TypeList flatten(const Type& t);
TypeList flatten(const TypeList& ts);

/// True when no arrow occurs anywhere in the list.
bool first_order(const TypeList& ts);

std::string to_string(const TypeList& ts);

class TypeSyntaxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the textual type syntax used by serialization and the surface
/// language: `R`, `Bundle`, `()`, `(A, B)`, `A -> B` (right associative).
Type parse_type(std::string_view text);

}  // namespace hyperad
