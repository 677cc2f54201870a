#pragma once

#include "hyperad/hypernet.hpp"

namespace hyperad {

/// A single-edge net with fresh interface vertices: inputs in operand order,
/// outputs in result order. Throws ConstructionError on a signature mismatch.
Hypernet build_atomic(const Label& label, const TypeList& operands, const TypeList& results);
Hypernet build_atomic(const std::string& op_name, const TypeList& operands, const TypeList& results);

/// Edge-free net of isolated vertices with equal input and output orders.
Hypernet identity_net(const TypeList& types);

/// Edge-free net exchanging the adjacent wires at `position` and
/// `position + 1`.
Hypernet swap_net(const TypeList& types, std::size_t position);

/// Sequential composition: `f`'s ordered outputs are glued to `g`'s inputs.
Hypernet compose_seq(const Hypernet& f, const Hypernet& g);

/// Tensor: disjoint union with concatenated interface orders.
Hypernet compose_par(const Hypernet& f, const Hypernet& g);

/// Wraps `body` in a Box edge. The first `inputs - bound_count` body inputs
/// are captured as the box's sources; the target has type
/// `Arrow(bound inputs, body outputs)`.
Hypernet abstraction(const Hypernet& body, std::size_t bound_count);

}  // namespace hyperad
