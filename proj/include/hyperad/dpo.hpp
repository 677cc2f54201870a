#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperad/hypernet.hpp"
#include "hyperad/iso.hpp"

namespace hyperad {

/// A span L <- I -> R with I given by interface positions: position k < |L
/// inputs| is the k-th input of both sides, later positions are outputs.
/// The legs need not be injective: an isolated vertex listed as both an input
/// and an output occupies two positions.
struct RewriteRule {
    std::string name;
    Hypernet lhs;
    Hypernet rhs;

    RewriteRule reversed() const;
    std::size_t interface_size() const { return lhs.inputs().size() + lhs.outputs().size(); }
    /// Problems with the span itself (interface type mismatch, invalid sides).
    std::optional<std::string> check() const;
};

/// A match L -> host, on one host level.
using Match = Embedding;

class GlueError : public Error {
public:
    using Error::Error;
};

class MatchError : public Error {
public:
    using Error::Error;
};

std::vector<Match> find_matches(const RewriteRule& rule, const Hypernet& host, std::size_t limit = 0);

/// Checks that `m` is an injective, label- and type-preserving map that meets
/// the gluing condition. Returns the first problem found.
std::optional<std::string> check_match(const RewriteRule& rule, const Hypernet& host, const Match& m);

/// The pushout complement G⁻ with the interface positions it exposes.
struct Context {
    Hypernet net;
    EdgeId level = kOutermost;
    std::vector<VertexId> interface;
};

/// Removes the image of L minus the interface. A host vertex hit by an input
/// and an output position is split: the input role keeps the vertex, the
/// output role gets a fresh one that takes its outside consumer.
Context pushout_complement(const Hypernet& host, const RewriteRule& rule, const Match& m);

struct Rewritten {
    Hypernet net;
    /// R -> result, usable as a match of the reversed rule.
    Match residual;
};

/// Glues R into the context along the interface positions. Throws GlueError
/// when a glued vertex would get two producers or two consumers.
Rewritten pushout_glue(const Context& ctx, const RewriteRule& rule);

/// One DPO step. Throws MatchError if `m` fails `check_match`.
Rewritten apply(const RewriteRule& rule, const Hypernet& host, const Match& m);

/// Deletes an edge together with everything nested inside it.
void remove_edge_deep(Hypernet& h, EdgeId e);

}  // namespace hyperad
