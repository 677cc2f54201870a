#pragma once

#include <memory>
#include <string>

#include "hyperad/foliation.hpp"
#include "hyperad/hypernet.hpp"

namespace hyperad {

/// Syntax of the free closed symmetric monoidal category over the signature.
struct StringTerm;
using TermPtr = std::shared_ptr<const StringTerm>;

struct StringTerm {
    enum class Kind { Atom, Id, Swap, Seq, Par, Abs };

    Kind kind = Kind::Id;
    /// Atom: its label. Eval/Copy/Discard atoms carry their kind here too.
    Label label;
    /// Atom: operand/result types. Id: `operands` only. Swap: symmetry
    /// exchanging the block `operands` with the block `results`.
    TypeList operands;
    TypeList results;
    /// Seq/Par: both children. Abs: body in `left`.
    TermPtr left;
    TermPtr right;
    std::size_t bound = 0;

    static TermPtr atom(Label label, TypeList operands, TypeList results);
    static TermPtr id(TypeList types);
    static TermPtr swap(TypeList a, TypeList b);
    static TermPtr seq(TermPtr f, TermPtr g);
    static TermPtr par(TermPtr f, TermPtr g);
    static TermPtr abs(TermPtr body, std::size_t bound);

    TypeList dom() const;
    TypeList cod() const;
};

bool operator==(const StringTerm& a, const StringTerm& b);

std::string to_string(const StringTerm& t);

/// Interprets a term as a hypernet via the constructors. Throws
/// CompositionError or ConstructionError on ill-typed terms.
Hypernet interpret(const StringTerm& t);

/// A term whose interpretation is isomorphic to `h`, read off the foliation.
TermPtr readback(const Hypernet& h);
TermPtr readback(const Foliation& f);

}  // namespace hyperad
