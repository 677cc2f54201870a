#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "hyperad/hypernet.hpp"

namespace hyperad {

/// Pattern -> host correspondence, covering nested levels of matched boxes.
struct Embedding {
    std::map<VertexId, VertexId> vertices;
    std::map<EdgeId, EdgeId> edges;
    /// Host level the pattern's outermost level landed on.
    EdgeId level = kOutermost;
};

struct MatchOptions {
    /// Restrict the host level; otherwise it is fixed by the first edge.
    std::optional<EdgeId> level;
    /// Upper bound on reported embeddings (0 = unlimited).
    std::size_t limit = 0;
};

/// Enumerates injective embeddings of `pattern` into `host` that satisfy the
/// gluing condition: vertices of the pattern that are not on its interface
/// have no incidences outside the image and are not on the host level's
/// interface. Box edges match only boxes with isomorphic inner graphs.
/// `visit` returns false to stop.
void enumerate_embeddings(const Hypernet& pattern, const Hypernet& host, const MatchOptions& options,
                          const std::function<bool(const Embedding&)>& visit);

std::vector<Embedding> find_embeddings(const Hypernet& pattern, const Hypernet& host,
                                       const MatchOptions& options = {});

struct IsoOptions {
    /// Positions whose wires may be permuted among themselves; empty means
    /// none. When given, sizes must equal the interface sizes.
    std::vector<bool> free_inputs;
    std::vector<bool> free_outputs;
};

/// Isomorphism respecting labels, types, hierarchy and interface orders
/// (except at free positions). Returns the a -> b correspondence.
std::optional<Embedding> find_isomorphism(const Hypernet& a, const Hypernet& b, const IsoOptions& options = {});

bool isomorphic(const Hypernet& a, const Hypernet& b, const IsoOptions& options = {});

/// Convenience mask: the last `n` of `size` positions are free.
std::vector<bool> free_suffix(std::size_t size, std::size_t n);
/// The first `n` of `size` positions are free.
std::vector<bool> free_prefix(std::size_t size, std::size_t n);

}  // namespace hyperad
