#pragma once

#include <map>
#include <string>
#include <vector>

#include "hyperad/hypernet.hpp"

namespace hyperad {

class AdError : public Error {
public:
    using Error::Error;
};

/// Pullback nets of primitive operations. A pullback of `op : As -> Bs` has
/// inputs `As ++ cot(Bs)` (the saved operands, then the incoming
/// cotangents) and outputs `cot(As)`.
class PullbackRegistry {
public:
    /// add, sub, mul, neg, sin, cos, exp.
    static const PullbackRegistry& builtin();

    /// Registers or replaces a pullback; throws AdError on an interface that
    /// does not fit the operation's signature.
    void add(const std::string& op, Hypernet pullback);
    const Hypernet* find(const std::string& op) const;
    std::vector<std::string> ops() const;

private:
    std::map<std::string, Hypernet> nets_;
};

/// The registered pullback of `op`; throws AdError when there is none.
const Hypernet& pullback_of(const std::string& op, const PullbackRegistry& reg = PullbackRegistry::builtin());

/// Forward (primal-plus-backpropagator) type: reals and bundles are
/// unchanged; `As -> Cs` becomes `T(As) -> T(Cs) ++ [cot(Cs) -> Bundle ++ cot(As)]`.
Type forward_type(const Type& t);
TypeList forward_types(const TypeList& ts);
/// Cotangent type: reals stay reals, everything else is a Bundle.
Type cotangent_type(const Type& t);
TypeList cotangent_types(const TypeList& ts);

/// Ledger wires saved by the forward pass for one edge, in ledger order.
TypeList ledger_types_of(const Hypernet& h, EdgeId e);
/// Ledger types of the whole outermost level in canonical order.
TypeList ledger_types(const Hypernet& h);

/// Forward pass with the outermost edges in `processed` (in that order)
/// replaced by their forward gadgets and all other edges left primal.
/// `processed` must be closed under producers. Outputs are
/// `T(outputs) ++ ledger` with the ledger in processing order.
Hypernet forward_partial(const Hypernet& h, const std::vector<EdgeId>& processed,
                         const PullbackRegistry& reg = PullbackRegistry::builtin());
/// Unprocessed outermost edges whose operands are all available.
std::vector<EdgeId> forward_fringe(const Hypernet& h, const std::vector<EdgeId>& processed);

/// Complete forward pass: `T(A) -> T(B) ++ ledger`.
Hypernet forward_pass(const Hypernet& h, const PullbackRegistry& reg = PullbackRegistry::builtin());

/// Reverse pass with the outermost edges in `processed` (in that order)
/// replaced by their reverse gadgets. Inputs are `ledger ++ cot(B)` with the
/// ledger in canonical forward order, outputs `cot(A)`. The unprocessed rest
/// is a single opaque `pending` edge consuming the unprocessed ledger wires
/// and the available cotangents (by primal vertex id), producing the missing
/// input cotangents (by input position).
Hypernet reverse_partial(const Hypernet& h, const std::vector<EdgeId>& processed,
                         const PullbackRegistry& reg = PullbackRegistry::builtin());
/// Unprocessed outermost edges whose results all have cotangents.
std::vector<EdgeId> reverse_fringe(const Hypernet& h, const std::vector<EdgeId>& processed);

/// Complete reverse pass: `ledger ++ cot(B) -> cot(A)`.
Hypernet reverse_pass(const Hypernet& h, const PullbackRegistry& reg = PullbackRegistry::builtin());

/// Reverse-mode adjoint of `h : A -> B`: a net `T(A) -> T(B) ++ [cot(B) -> cot(A)]`
/// whose last output is the backpropagator closure.
Hypernet adjoint(const Hypernet& h, const PullbackRegistry& reg = PullbackRegistry::builtin());

}  // namespace hyperad
