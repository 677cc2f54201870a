#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperad/dpo.hpp"

namespace hyperad {

/// A concrete rule instance together with its match in a given host.
struct Instance {
    RewriteRule rule;
    Match match;
};

/// A family of rules instantiated on demand from the host. Every instance's
/// left side is a copy of the host fragment it matches.
struct Schema {
    std::string name;
    /// Up to `limit` instances (0 = all); `outermost` restricts to the top level.
    std::function<std::vector<Instance>(const Hypernet& host, std::size_t limit, bool outermost)> find;
};

namespace schemata {

/// Beta: a box applied by an eval is replaced by its body.
Schema beta();
/// Eta: a box that only evaluates its single captured function is that function.
Schema eta();
/// Copying a single-result edge duplicates the edge.
Schema copy_natural(bool boxes_only = false);
/// An edge whose results are all discarded is removed, its operands discarded.
Schema discard_natural(bool boxes_only = false);
/// A single-result edge feeding a box moves inside the box.
Schema lamb();
/// Identity span on a single edge; the structural rules absorbed by the
/// representation (exchange, associativity, units) appear as such.
Schema var();
/// Identity span on a chain of two edges.
Schema comp();
/// Two independent edges feeding one consumer, recreated in the other order.
Schema exchange();
/// Folds a real primitive whose operands are all constants.
Schema delta();
/// A copy with one discarded result is the identity.
Schema counit();

}  // namespace schemata

/// Rule set used by the evaluator: beta, copy of boxes, discard of boxes.
std::vector<Schema> evaluation_rules();
/// All schemata, by name.
std::vector<Schema> all_schemata();
/// The named rule library; same as `all_schemata`.
inline std::vector<Schema> rule_library() { return all_schemata(); }
std::optional<Schema> schema_by_name(const std::string& name);
/// Wraps a fixed rule (for example one loaded from a rule pack).
Schema schema_from_rule(const RewriteRule& rule);

class FuelExhausted : public Error {
public:
    FuelExhausted(std::string msg, Hypernet partial) : Error(std::move(msg)), partial(std::move(partial)) {}
    Hypernet partial;
};

struct NormalizeOptions {
    std::size_t fuel = 1'000'000;
    bool outermost_only = false;
};

struct Normalized {
    Hypernet net;
    std::vector<std::string> trace;
};

/// Rewrites until no rule applies, trying rules in order and taking the first
/// instance of the first applicable rule at each step. Throws FuelExhausted
/// if a redex remains after `fuel` steps.
Normalized normalize(const Hypernet& h, const std::vector<Schema>& rules, const NormalizeOptions& options = {});

/// Rule packs: `{version, rules: [{name, left, right, interface}], pullbacks:
/// [{op, net}]}`.
struct RulePack {
    std::vector<RewriteRule> rules;
    std::map<std::string, Hypernet> pullbacks;
};

RulePack rule_pack_from_json(const nlohmann::json& doc);
nlohmann::json rule_pack_to_json(const RulePack& pack);

}  // namespace hyperad
