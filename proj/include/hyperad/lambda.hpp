#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperad/hypernet.hpp"

namespace hyperad::lambda {

struct SourcePos {
    int line = 1;
    int column = 1;
};

/// Front-end error carrying a source position.
class FrontendError : public Error {
public:
    FrontendError(const std::string& message, SourcePos pos);
    SourcePos pos;
    std::string bare_message;
};

class ParseError : public FrontendError {
public:
    using FrontendError::FrontendError;
};

class TypeCheckError : public FrontendError {
public:
    using FrontendError::FrontendError;
};

/// Surface types keep tuple structure; wires see them flattened.
struct SType;
using STypePtr = std::shared_ptr<const SType>;

struct SType {
    enum class Kind { Real, Arrow, Tuple };
    Kind kind = Kind::Real;
    std::vector<STypePtr> items;  // Arrow: {from, to}. Tuple: components.

    static STypePtr real();
    static STypePtr arrow(STypePtr from, STypePtr to);
    static STypePtr tuple(std::vector<STypePtr> items);
};

bool operator==(const SType& a, const SType& b);
std::string to_string(const SType& t);
/// Wire types of a value of this type.
TypeList wires(const SType& t);
STypePtr parse_stype(std::string_view text);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Var, Const, Lam, App, Let, Prim, Tuple, Proj };

    Kind kind = Kind::Const;
    SourcePos pos;
    /// Var: referenced name. Lam/Let: bound name. Prim: primitive name.
    std::string name;
    double value = 0.0;
    /// Lam: parameter type.
    STypePtr param_type;
    /// Lam: {body}. App: {fn, arg}. Let: {bound, body}. Prim/Tuple: items.
    /// Proj: {tuple}.
    std::vector<TermPtr> kids;
    std::size_t index = 0;
    /// Unique binder id after resolution (Var: referenced binder, Lam/Let: own).
    int binder = -1;
    /// Set by `check`.
    STypePtr type;
};

std::string to_string(const Term& t);

/// Parses a program. Lambda binders and let parameters without an annotation
/// have type R; the primitives sin, cos, exp, neg are reserved words.
TermPtr parse(std::string_view source);

struct Program {
    TermPtr term;  // resolved: every Var and binder carries a binder id
    std::vector<std::string> inputs;
    std::vector<int> input_binders;
    STypePtr type;
};

/// Resolves names and typechecks. Free variables become real-valued inputs,
/// ordered by `vars` when given (unlisted free variables are an error) and by
/// first occurrence otherwise.
Program check(const TermPtr& term, const std::optional<std::vector<std::string>>& vars = std::nullopt);

/// Type of `term` in the environment `env` of real-valued variables.
STypePtr typecheck(const TermPtr& term, const std::vector<std::string>& env);

/// Translates a checked program into a hypernet: lambdas become boxes,
/// applications evals, shared variables copy chains, unused ones discards.
Hypernet elaborate(const Program& program);

/// parse + check + elaborate.
Hypernet compile(std::string_view source, const std::optional<std::vector<std::string>>& vars = std::nullopt);

}  // namespace hyperad::lambda
