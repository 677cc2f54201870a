#pragma once

#include <memory>
#include <vector>

#include "hyperad/hypernet.hpp"

namespace hyperad {

/// Deterministic topological order of the edges of one level. Among ready
/// edges the smallest (label text, position of the first source in the
/// current wire list, creation id) goes first; nullary edges sort after
/// edges with sources of the same label.
std::vector<EdgeId> canonical_order(const Hypernet& h, EdgeId level = kOutermost);

struct Foliation;

/// One singleton leaf: an atom (or a unary swap) tensored with identities.
struct Leaf {
    enum class Kind { Swap, Atom };

    Kind kind = Kind::Atom;
    /// Types of all wires entering the leaf.
    TypeList wires;
    /// Swap: index of the first exchanged wire. Atom: identity wires to the left.
    std::size_t position = 0;

    // Atom data.
    EdgeId edge = 0;
    Label label;
    TypeList operands;
    TypeList results;
    /// Box atoms: the body, itself maximally sequential, and its bound count.
    std::shared_ptr<const Foliation> body;
    std::size_t bound = 0;

    std::size_t right() const { return wires.size() - position - operands.size(); }
};

/// A maximally sequential hierarchical foliation: the sequential composite of
/// its leaves, each a single atom or a unary swap with identities around it.
struct Foliation {
    TypeList inputs;
    TypeList outputs;
    std::vector<Leaf> leaves;

    std::size_t atom_count() const;
};

/// Foliates one level (recursively for boxes), following `canonical_order`.
Foliation foliate(const Hypernet& h);

/// Sequentially recomposes the leaves into a net.
Hypernet recompose(const Foliation& f);

}  // namespace hyperad
