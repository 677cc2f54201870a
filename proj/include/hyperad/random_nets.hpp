#pragma once

#include <optional>
#include <random>

#include "hyperad/hypernet.hpp"
#include "hyperad/string_term.hpp"

namespace hyperad {

struct RandomNetOptions {
    /// Upper bound on edges, counted over all levels.
    std::size_t max_edges = 12;
    /// Maximum box nesting.
    std::size_t max_depth = 2;
    std::size_t min_inputs = 1;
    std::size_t max_inputs = 3;
    /// Fixed input types; overrides the input counts.
    std::optional<TypeList> inputs;
    /// Reals-only interface. Otherwise arrow-typed inputs and outputs occur.
    bool first_order = true;
    /// Reject nets without outputs.
    bool require_output = true;
};

/// A random valid, well-typed net over the real primitives with boxes,
/// evals, copies and discards.
Hypernet random_net(std::mt19937_64& rng, const RandomNetOptions& options = {});

struct RandomTermOptions {
    std::size_t size = 8;
    std::size_t max_abs_depth = 2;
};

/// A random well-typed string diagram term with domain `dom`.
TermPtr random_term(std::mt19937_64& rng, const TypeList& dom, const RandomTermOptions& options = {});

/// Applies `steps` random laws of symmetric monoidal categories
/// (associativity, units, interchange, swap naturality, involution,
/// hexagon) at random subterms. The result denotes the same morphism.
TermPtr smc_shuffle(std::mt19937_64& rng, const TermPtr& t, std::size_t steps);

}  // namespace hyperad
