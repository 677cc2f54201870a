#include "hyperad/rules.hpp"

#include <algorithm>

#include "hyperad/construct.hpp"
#include "hyperad/serialize.hpp"

namespace hyperad {

namespace {

using RhsFn = std::function<std::vector<VertexId>(NetBuilder&, const std::vector<VertexId>&)>;

Instance make_instance(const Hypernet& host, const std::string& name, const std::vector<EdgeId>& edges,
                       const std::vector<VertexId>& ins, const std::vector<VertexId>& outs, const RhsFn& rhs) {
    Instance inst;
    inst.rule.name = name;
    std::map<VertexId, VertexId> vmap;
    std::map<EdgeId, EdgeId> emap;
    inst.rule.lhs = extract(host, edges, ins, outs, &vmap, &emap);
    NetBuilder rb(inst.rule.rhs);
    auto w = rb.inputs(host.types_of(ins));
    rb.outputs(rhs(rb, w));
    inst.match.vertices = std::move(vmap);
    inst.match.edges = std::move(emap);
    inst.match.level = host.edge(edges.front()).parent;
    return inst;
}

/// Same edges, same interface, rebuilt in the given order: L and R coincide
/// up to creation order.
Instance same_span(const Hypernet& host, const std::string& name, const std::vector<EdgeId>& edges,
                   const std::vector<EdgeId>& rhs_order, const std::vector<VertexId>& ins,
                   const std::vector<VertexId>& outs) {
    Instance inst = make_instance(host, name, edges, ins, outs, [](NetBuilder&, const std::vector<VertexId>& w) { return w; });
    inst.rule.rhs = extract(host, rhs_order, ins, outs);
    return inst;
}

using AnchorFn = std::function<std::optional<Instance>(const Hypernet&, const NetIndex&, EdgeId)>;

Schema anchored(std::string name, AnchorFn at) {
    Schema s;
    s.name = name;
    s.find = [at = std::move(at)](const Hypernet& host, std::size_t limit, bool outermost) {
        std::vector<Instance> out;
        NetIndex idx(host);
        for (const auto& [id, e] : host.edges()) {
            if (outermost && e.parent != kOutermost) continue;
            if (auto inst = at(host, idx, id)) {
                out.push_back(std::move(*inst));
                if (limit != 0 && out.size() >= limit) break;
            }
        }
        return out;
    };
    return s;
}

std::vector<VertexId> concat(std::vector<VertexId> a, const std::vector<VertexId>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::optional<std::size_t> consumer_of_single(const Hypernet& host, const NetIndex& idx, EdgeId e, EdgeId& consumer) {
    const Edge& ed = host.edge(e);
    if (ed.targets.size() != 1) return std::nullopt;
    auto c = idx.consumer(ed.targets[0]);
    if (!c) return std::nullopt;
    consumer = c->edge;
    return c->position;
}

}  // namespace

namespace schemata {

Schema beta() {
    return anchored("BR", [](const Hypernet& host, const NetIndex& idx, EdgeId v) -> std::optional<Instance> {
        const Edge& ev = host.edge(v);
        if (ev.label.kind != EdgeKind::Eval) return std::nullopt;
        auto p = idx.producer(ev.sources[0]);
        if (!p || host.edge(p->edge).label.kind != EdgeKind::Box) return std::nullopt;
        EdgeId b = p->edge;
        const Edge& eb = host.edge(b);
        std::vector<VertexId> args(ev.sources.begin() + 1, ev.sources.end());
        Hypernet body = inner_net(host, b);
        return make_instance(host, "BR", {b, v}, concat(eb.sources, args), ev.targets,
                             [&](NetBuilder& rb, const std::vector<VertexId>& w) { return rb.embed(body, w); });
    });
}

Schema eta() {
    return anchored("Eta", [](const Hypernet& host, const NetIndex&, EdgeId b) -> std::optional<Instance> {
        const Edge& eb = host.edge(b);
        if (eb.label.kind != EdgeKind::Box || eb.sources.size() != 1) return std::nullopt;
        auto inner = host.edges_at(b);
        if (inner.size() != 1) return std::nullopt;
        const Edge& ev = host.edge(inner[0]);
        if (ev.label.kind != EdgeKind::Eval || ev.sources != eb.inner_inputs || ev.targets != eb.inner_outputs)
            return std::nullopt;
        return make_instance(host, "Eta", {b}, eb.sources, eb.targets,
                             [](NetBuilder&, const std::vector<VertexId>& w) { return w; });
    });
}

Schema copy_natural(bool boxes_only) {
    std::string name = boxes_only ? "App[box]" : "App";
    return anchored(name, [boxes_only, name](const Hypernet& host, const NetIndex& idx, EdgeId c) -> std::optional<Instance> {
        const Edge& ec = host.edge(c);
        if (ec.label.kind != EdgeKind::Copy) return std::nullopt;
        auto p = idx.producer(ec.sources[0]);
        if (!p) return std::nullopt;
        EdgeId e = p->edge;
        const Edge& ee = host.edge(e);
        if (ee.targets.size() != 1) return std::nullopt;
        if (boxes_only && ee.label.kind != EdgeKind::Box) return std::nullopt;
        return make_instance(host, name, {e, c}, ee.sources, ec.targets,
                             [&](NetBuilder& rb, const std::vector<VertexId>& w) {
                                 std::vector<VertexId> first, second;
                                 for (auto x : w) {
                                     auto [a, b] = rb.copy(x);
                                     first.push_back(a);
                                     second.push_back(b);
                                 }
                                 auto o1 = rb.replicate(host, e, first);
                                 auto o2 = rb.replicate(host, e, second);
                                 return std::vector<VertexId>{o1[0], o2[0]};
                             });
    });
}

Schema discard_natural(bool boxes_only) {
    std::string name = boxes_only ? "Gc[box]" : "Gc";
    return anchored(name, [boxes_only, name](const Hypernet& host, const NetIndex& idx, EdgeId e) -> std::optional<Instance> {
        const Edge& ee = host.edge(e);
        if (ee.label.kind == EdgeKind::Discard || ee.targets.empty()) return std::nullopt;
        if (boxes_only && ee.label.kind != EdgeKind::Box) return std::nullopt;
        std::vector<EdgeId> edges{e};
        for (auto t : ee.targets) {
            auto c = idx.consumer(t);
            if (!c || host.edge(c->edge).label.kind != EdgeKind::Discard) return std::nullopt;
            edges.push_back(c->edge);
        }
        return make_instance(host, name, edges, ee.sources, {}, [](NetBuilder& rb, const std::vector<VertexId>& w) {
            for (auto x : w) rb.discard(x);
            return std::vector<VertexId>{};
        });
    });
}

Schema lamb() {
    return anchored("Lamb", [](const Hypernet& host, const NetIndex& idx, EdgeId e) -> std::optional<Instance> {
        EdgeId b = 0;
        auto j = consumer_of_single(host, idx, e, b);
        if (!j || host.edge(b).label.kind != EdgeKind::Box) return std::nullopt;
        const Edge& ee = host.edge(e);
        const Edge& eb = host.edge(b);
        std::vector<VertexId> rest;
        for (std::size_t k = 0; k < eb.sources.size(); ++k)
            if (k != *j) rest.push_back(eb.sources[k]);
        const std::size_t ne = ee.sources.size();
        const std::size_t jj = *j;
        Hypernet body = inner_net(host, b);
        TypeList all = body.input_types();
        TypeList bound(all.begin() + static_cast<std::ptrdiff_t>(eb.sources.size()), all.end());
        return make_instance(
            host, "Lamb", {e, b}, concat(ee.sources, rest), eb.targets,
            [&](NetBuilder& rb, const std::vector<VertexId>& w) {
                std::vector<VertexId> caps(w.begin() + static_cast<std::ptrdiff_t>(ne), w.end());
                caps.insert(caps.begin() + static_cast<std::ptrdiff_t>(jj), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(ne));
                VertexId fn = rb.box(caps, bound, [&](NetBuilder& in, std::span<const VertexId> iw) {
                    std::vector<VertexId> moved(iw.begin() + static_cast<std::ptrdiff_t>(jj),
                                                iw.begin() + static_cast<std::ptrdiff_t>(jj + ne));
                    VertexId t = in.replicate(host, e, moved)[0];
                    std::vector<VertexId> body_in(iw.begin(), iw.begin() + static_cast<std::ptrdiff_t>(jj));
                    body_in.push_back(t);
                    body_in.insert(body_in.end(), iw.begin() + static_cast<std::ptrdiff_t>(jj + ne), iw.end());
                    return in.embed(body, body_in);
                });
                return std::vector<VertexId>{fn};
            });
    });
}

Schema var() {
    return anchored("Var", [](const Hypernet& host, const NetIndex&, EdgeId e) -> std::optional<Instance> {
        const Edge& ee = host.edge(e);
        return same_span(host, "Var", {e}, {e}, ee.sources, ee.targets);
    });
}

Schema comp() {
    return anchored("Comp", [](const Hypernet& host, const NetIndex& idx, EdgeId e1) -> std::optional<Instance> {
        EdgeId e2 = 0;
        auto j = consumer_of_single(host, idx, e1, e2);
        if (!j) return std::nullopt;
        const Edge& a = host.edge(e1);
        const Edge& b = host.edge(e2);
        std::vector<VertexId> ins = a.sources;
        for (std::size_t k = 0; k < b.sources.size(); ++k)
            if (k != *j) ins.push_back(b.sources[k]);
        return same_span(host, "Comp", {e1, e2}, {e1, e2}, ins, b.targets);
    });
}

Schema exchange() {
    return anchored("CE", [](const Hypernet& host, const NetIndex& idx, EdgeId c) -> std::optional<Instance> {
        const Edge& ec = host.edge(c);
        std::vector<EdgeId> singles;
        for (auto s : ec.sources) {
            auto p = idx.producer(s);
            if (p && host.edge(p->edge).targets.size() == 1) singles.push_back(p->edge);
            if (singles.size() == 2) break;
        }
        if (singles.size() < 2) return std::nullopt;
        const Edge& a = host.edge(singles[0]);
        const Edge& b = host.edge(singles[1]);
        return same_span(host, "CE", {singles[0], singles[1]}, {singles[1], singles[0]}, concat(a.sources, b.sources),
                         {a.targets[0], b.targets[0]});
    });
}

Schema delta() {
    return anchored("Delta", [](const Hypernet& host, const NetIndex& idx, EdgeId e) -> std::optional<Instance> {
        const Edge& ee = host.edge(e);
        if (ee.label.kind != EdgeKind::Op || ee.label.is_constant() || ee.sources.empty()) return std::nullopt;
        const auto& sig = Signature::builtin();
        if (!sig.results_of(ee.label.name)) return std::nullopt;
        if (!first_order(host.types_of(ee.sources)) || !first_order(host.types_of(ee.targets))) return std::nullopt;
        for (auto t : concat(ee.sources, ee.targets))
            if (!host.vertex(t).type.is_real()) return std::nullopt;
        std::vector<EdgeId> edges;
        std::vector<Value> values;
        for (auto s : ee.sources) {
            auto p = idx.producer(s);
            if (!p || !host.edge(p->edge).label.is_constant()) return std::nullopt;
            edges.push_back(p->edge);
            values.emplace_back(host.edge(p->edge).label.value);
        }
        edges.push_back(e);
        auto result = sig.evaluate(ee.label, values, host.types_of(ee.targets));
        return make_instance(host, "Delta", edges, {}, ee.targets, [&](NetBuilder& rb, const std::vector<VertexId>&) {
            std::vector<VertexId> out;
            for (const auto& r : result) out.push_back(rb.constant(r.real()));
            return out;
        });
    });
}

Schema counit() {
    return anchored("Counit", [](const Hypernet& host, const NetIndex& idx, EdgeId c) -> std::optional<Instance> {
        const Edge& ec = host.edge(c);
        if (ec.label.kind != EdgeKind::Copy) return std::nullopt;
        for (std::size_t k = 0; k < 2; ++k) {
            auto d = idx.consumer(ec.targets[k]);
            if (!d || host.edge(d->edge).label.kind != EdgeKind::Discard) continue;
            return make_instance(host, "Counit", {c, d->edge}, ec.sources, {ec.targets[1 - k]},
                                 [](NetBuilder&, const std::vector<VertexId>& w) { return w; });
        }
        return std::nullopt;
    });
}

}  // namespace schemata

std::vector<Schema> evaluation_rules() {
    return {schemata::beta(), schemata::copy_natural(true), schemata::discard_natural(true)};
}

std::vector<Schema> all_schemata() {
    using namespace schemata;
    return {beta(), eta(), copy_natural(false), copy_natural(true), discard_natural(false), discard_natural(true),
            lamb(), var(), comp(), exchange(), delta(), counit()};
}

std::optional<Schema> schema_by_name(const std::string& name) {
    for (auto& s : all_schemata())
        if (s.name == name) return s;
    return std::nullopt;
}

Schema schema_from_rule(const RewriteRule& rule) {
    Schema s;
    s.name = rule.name;
    s.find = [rule](const Hypernet& host, std::size_t limit, bool outermost) {
        MatchOptions opt;
        opt.limit = limit;
        if (outermost) opt.level = kOutermost;
        std::vector<Instance> out;
        for (auto& m : find_embeddings(rule.lhs, host, opt)) out.push_back({rule, std::move(m)});
        return out;
    };
    return s;
}

Normalized normalize(const Hypernet& h, const std::vector<Schema>& rules, const NormalizeOptions& options) {
    Normalized out;
    out.net = h;
    for (;;) {
        std::optional<Instance> next;
        for (const auto& r : rules) {
            auto found = r.find(out.net, 1, options.outermost_only);
            if (!found.empty()) {
                next = std::move(found.front());
                break;
            }
        }
        if (!next) return out;
        if (out.trace.size() >= options.fuel)
            throw FuelExhausted("normalization ran out of fuel after " + std::to_string(out.trace.size()) +
                                    " steps; next redex: " + next->rule.name,
                                out.net);
        out.net = apply(next->rule, out.net, next->match).net;
        out.trace.push_back(next->rule.name);
    }
}

RulePack rule_pack_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("version", 0) != kFormatVersion)
        throw SerializationError("rule pack: missing or unsupported version");
    RulePack pack;
    for (const auto& jr : doc.value("rules", nlohmann::json::array())) {
        RewriteRule r;
        r.name = jr.value("name", std::string("rule"));
        if (!jr.contains("left") || !jr.contains("right"))
            throw SerializationError("rule pack: rule '" + r.name + "' needs left and right");
        r.lhs = from_json(jr.at("left"));
        r.rhs = from_json(jr.at("right"));
        if (jr.contains("interface")) {
            auto n = jr.at("interface").get<std::size_t>();
            if (n != r.interface_size())
                throw SerializationError("rule pack: rule '" + r.name + "' declares " + std::to_string(n) +
                                         " interface positions, its left side has " + std::to_string(r.interface_size()));
        }
        if (auto err = r.check()) throw SerializationError("rule pack: " + *err);
        pack.rules.push_back(std::move(r));
    }
    for (const auto& jp : doc.value("pullbacks", nlohmann::json::array())) {
        if (!jp.contains("op") || !jp.contains("net")) throw SerializationError("rule pack: pullback needs op and net");
        pack.pullbacks[jp.at("op").get<std::string>()] = from_json(jp.at("net"));
    }
    return pack;
}

nlohmann::json rule_pack_to_json(const RulePack& pack) {
    nlohmann::json doc;
    doc["version"] = kFormatVersion;
    doc["rules"] = nlohmann::json::array();
    for (const auto& r : pack.rules)
        doc["rules"].push_back({{"name", r.name}, {"left", to_json(r.lhs)}, {"right", to_json(r.rhs)}, {"interface", r.interface_size()}});
    doc["pullbacks"] = nlohmann::json::array();
    for (const auto& [op, net] : pack.pullbacks) doc["pullbacks"].push_back({{"op", op}, {"net", to_json(net)}});
    return doc;
}

}  // namespace hyperad
