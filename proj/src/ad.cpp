#include "hyperad/ad.hpp"

#include <algorithm>
#include <set>

#include "hyperad/foliation.hpp"
#include "hyperad/validate.hpp"

namespace hyperad {

namespace {

Hypernet make_pullback(const TypeList& ins, const std::function<std::vector<VertexId>(NetBuilder&, std::vector<VertexId>)>& f) {
    Hypernet h;
    NetBuilder b(h);
    auto w = b.inputs(ins);
    b.outputs(f(b, w));
    return h;
}

}  // namespace

const PullbackRegistry& PullbackRegistry::builtin() {
    static const PullbackRegistry reg = [] {
        const Type R = Type::real();
        PullbackRegistry r;
        r.add("add", make_pullback({R, R, R}, [](NetBuilder& b, std::vector<VertexId> w) {
                  b.discard(w[0]);
                  b.discard(w[1]);
                  auto [d1, d2] = b.copy(w[2]);
                  return std::vector<VertexId>{d1, d2};
              }));
        r.add("sub", make_pullback({R, R, R}, [](NetBuilder& b, std::vector<VertexId> w) {
                  b.discard(w[0]);
                  b.discard(w[1]);
                  auto [d1, d2] = b.copy(w[2]);
                  return std::vector<VertexId>{d1, b.op1("neg", {d2})};
              }));
        r.add("mul", make_pullback({R, R, R}, [](NetBuilder& b, std::vector<VertexId> w) {
                  auto [d1, d2] = b.copy(w[2]);
                  return std::vector<VertexId>{b.op1("mul", {w[1], d1}), b.op1("mul", {w[0], d2})};
              }));
        r.add("neg", make_pullback({R, R}, [](NetBuilder& b, std::vector<VertexId> w) {
                  b.discard(w[0]);
                  return std::vector<VertexId>{b.op1("neg", {w[1]})};
              }));
        r.add("sin", make_pullback({R, R}, [](NetBuilder& b, std::vector<VertexId> w) {
                  return std::vector<VertexId>{b.op1("mul", {b.op1("cos", {w[0]}), w[1]})};
              }));
        r.add("cos", make_pullback({R, R}, [](NetBuilder& b, std::vector<VertexId> w) {
                  return std::vector<VertexId>{b.op1("mul", {b.op1("neg", {b.op1("sin", {w[0]})}), w[1]})};
              }));
        r.add("exp", make_pullback({R, R}, [](NetBuilder& b, std::vector<VertexId> w) {
                  return std::vector<VertexId>{b.op1("mul", {b.op1("exp", {w[0]}), w[1]})};
              }));
        return r;
    }();
    return reg;
}

void PullbackRegistry::add(const std::string& op, Hypernet pullback) {
    const auto* e = Signature::builtin().find(op);
    if (!e || e->variadic || op == "const") throw AdError("cannot register a pullback for '" + op + "'");
    TypeList want_in = e->operands;
    for (const auto& t : cotangent_types(e->results)) want_in.push_back(t);
    if (pullback.input_types() != want_in || pullback.output_types() != cotangent_types(e->operands))
        throw AdError("pullback for '" + op + "' must have type " + to_string(want_in) + " -> " +
                      to_string(cotangent_types(e->operands)) + ", got " + to_string(pullback.input_types()) + " -> " +
                      to_string(pullback.output_types()));
    require_well_typed(pullback, "pullback for '" + op + "'");
    nets_[op] = std::move(pullback);
}

const Hypernet* PullbackRegistry::find(const std::string& op) const {
    auto it = nets_.find(op);
    return it == nets_.end() ? nullptr : &it->second;
}

std::vector<std::string> PullbackRegistry::ops() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : nets_) out.push_back(k);
    return out;
}

const Hypernet& pullback_of(const std::string& op, const PullbackRegistry& reg) {
    const Hypernet* pb = reg.find(op);
    if (!pb) throw AdError("no pullback registered for operation '" + op + "'");
    return *pb;
}

Type cotangent_type(const Type& t) { return t.is_real() ? Type::real() : Type::bundle(); }

TypeList cotangent_types(const TypeList& ts) {
    TypeList out;
    for (const auto& t : ts) out.push_back(cotangent_type(t));
    return out;
}

Type forward_type(const Type& t) {
    if (!t.is_arrow()) return t;
    TypeList res = forward_types(t.results());
    TypeList back{Type::bundle()};
    for (const auto& c : cotangent_types(t.operands())) back.push_back(c);
    res.push_back(Type::arrow(cotangent_types(t.results()), back));
    return Type::arrow(forward_types(t.operands()), res);
}

TypeList forward_types(const TypeList& ts) {
    TypeList out;
    for (const auto& t : ts) out.push_back(forward_type(t));
    return out;
}

TypeList ledger_types_of(const Hypernet& h, EdgeId e) {
    const Edge& ed = h.edge(e);
    if (ed.label.kind == EdgeKind::Op && !ed.label.is_constant()) return forward_types(h.types_of(ed.sources));
    if (ed.label.kind == EdgeKind::Eval) return {forward_type(h.vertex(ed.sources[0]).type).results().back()};
    return {};
}

TypeList ledger_types(const Hypernet& h) {
    TypeList out;
    for (EdgeId e : canonical_order(h)) {
        auto t = ledger_types_of(h, e);
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

namespace {

Hypernet adjoint_impl(const Hypernet& h, std::size_t packed_prefix, bool packed, const PullbackRegistry& reg);

const Hypernet& pullback_for(const PullbackRegistry& reg, const Label& label) { return pullback_of(label.name, reg); }

std::vector<EdgeId> require_outermost(const Hypernet& h, const std::vector<EdgeId>& seq) {
    std::set<EdgeId> seen;
    for (EdgeId e : seq) {
        if (!h.has_edge(e) || h.edge(e).parent != kOutermost)
            throw AdError("e" + std::to_string(e) + " is not an outermost edge");
        if (!seen.insert(e).second) throw AdError("e" + std::to_string(e) + " processed twice");
    }
    return seq;
}

}  // namespace

Hypernet forward_partial(const Hypernet& h, const std::vector<EdgeId>& processed, const PullbackRegistry& reg) {
    require_outermost(h, processed);
    std::set<EdgeId> done(processed.begin(), processed.end());
    Hypernet out;
    NetBuilder b(out);
    std::map<VertexId, VertexId> w;
    for (auto v : h.inputs()) w[v] = b.input(forward_type(h.vertex(v).type));
    std::vector<VertexId> ledger;
    auto sources_of = [&](EdgeId e) {
        std::vector<VertexId> s;
        for (auto v : h.edge(e).sources) {
            auto it = w.find(v);
            if (it == w.end()) throw AdError("e" + std::to_string(e) + " is processed before its operands");
            s.push_back(it->second);
        }
        return s;
    };
    auto bind = [&](EdgeId e, const std::vector<VertexId>& outs) {
        const auto& t = h.edge(e).targets;
        for (std::size_t i = 0; i < t.size(); ++i) w[t[i]] = outs[i];
    };
    for (EdgeId e : processed) {
        const Edge& ed = h.edge(e);
        auto src = sources_of(e);
        switch (ed.label.kind) {
            case EdgeKind::Op: {
                if (ed.label.is_constant()) {
                    bind(e, b.op(ed.label, {}, h.types_of(ed.targets)));
                    break;
                }
                pullback_for(reg, ed.label);
                std::vector<VertexId> feed;
                for (auto s : src) {
                    auto [a, c] = b.copy(s);
                    feed.push_back(a);
                    ledger.push_back(c);
                }
                bind(e, b.op(ed.label, feed, forward_types(h.types_of(ed.targets))));
                break;
            }
            case EdgeKind::Copy: {
                auto [a, c] = b.copy(src[0]);
                bind(e, {a, c});
                break;
            }
            case EdgeKind::Discard: b.discard(src[0]); break;
            case EdgeKind::Eval: {
                std::vector<VertexId> args(src.begin() + 1, src.end());
                auto outs = b.eval(src[0], args);
                ledger.push_back(outs.back());
                outs.pop_back();
                bind(e, outs);
                break;
            }
            case EdgeKind::Box: {
                Hypernet body = inner_net(h, e);
                Hypernet fwd = adjoint_impl(body, ed.sources.size(), true, reg);
                TypeList all = fwd.input_types();
                TypeList bound(all.begin() + static_cast<std::ptrdiff_t>(src.size()), all.end());
                bind(e, {b.box(src, bound, [&](NetBuilder& in, std::span<const VertexId> iw) { return in.embed(fwd, iw); })});
                break;
            }
        }
    }
    for (EdgeId e : canonical_order(h)) {
        if (done.count(e)) continue;
        bind(e, b.replicate(h, e, sources_of(e)));
    }
    for (auto v : h.outputs()) b.output(w.at(v));
    b.outputs(ledger);
    return out;
}

std::vector<EdgeId> forward_fringe(const Hypernet& h, const std::vector<EdgeId>& processed) {
    std::set<EdgeId> done(processed.begin(), processed.end());
    NetIndex idx(h);
    std::vector<EdgeId> out;
    for (EdgeId e : idx.edges_at(kOutermost)) {
        if (done.count(e)) continue;
        bool ready = true;
        for (auto v : h.edge(e).sources) {
            auto p = idx.producer(v);
            if (p && !done.count(p->edge)) ready = false;
        }
        if (ready) out.push_back(e);
    }
    return out;
}

Hypernet forward_pass(const Hypernet& h, const PullbackRegistry& reg) {
    return forward_partial(h, canonical_order(h), reg);
}

Hypernet reverse_partial(const Hypernet& h, const std::vector<EdgeId>& processed, const PullbackRegistry& reg) {
    require_outermost(h, processed);
    std::set<EdgeId> done(processed.begin(), processed.end());
    const auto order = canonical_order(h);
    Hypernet out;
    NetBuilder b(out);
    std::map<EdgeId, std::vector<VertexId>> saved;
    std::vector<EdgeId> ledger_owner;
    std::vector<VertexId> ledger;
    for (EdgeId e : order)
        for (const auto& t : ledger_types_of(h, e)) {
            VertexId x = b.input(t);
            saved[e].push_back(x);
            ledger.push_back(x);
            ledger_owner.push_back(e);
        }
    std::map<VertexId, VertexId> ct;
    for (auto v : h.outputs()) ct[v] = b.input(cotangent_type(h.vertex(v).type));

    auto zero = [&](const Type& t) {
        return t.is_real() ? b.constant(0.0) : b.op(Label::op("bzero"), {}, TypeList{Type::bundle()})[0];
    };
    auto plus = [&](const Type& t, VertexId x, VertexId y) {
        return b.op(Label::op(t.is_real() ? "add" : "badd"), {x, y}, TypeList{cotangent_type(t)})[0];
    };
    auto bind = [&](EdgeId e, const std::vector<VertexId>& cts) {
        const auto& s = h.edge(e).sources;
        for (std::size_t i = 0; i < s.size(); ++i) ct[s[i]] = cts[i];
    };

    for (EdgeId e : processed) {
        const Edge& ed = h.edge(e);
        std::vector<VertexId> tc;
        for (auto v : ed.targets) {
            auto it = ct.find(v);
            if (it == ct.end()) throw AdError("e" + std::to_string(e) + " is reversed before its consumers");
            tc.push_back(it->second);
        }
        switch (ed.label.kind) {
            case EdgeKind::Op: {
                if (ed.label.is_constant()) {
                    for (auto x : tc) b.discard(x);
                    break;
                }
                std::vector<VertexId> in = saved.at(e);
                in.insert(in.end(), tc.begin(), tc.end());
                bind(e, b.embed(pullback_for(reg, ed.label), in));
                break;
            }
            case EdgeKind::Copy: bind(e, {plus(h.vertex(ed.sources[0]).type, tc[0], tc[1])}); break;
            case EdgeKind::Discard: bind(e, {zero(h.vertex(ed.sources[0]).type)}); break;
            case EdgeKind::Eval: bind(e, b.eval(saved.at(e).at(0), tc)); break;
            case EdgeKind::Box: bind(e, b.op(Label::op("unpack"), {tc[0]}, cotangent_types(h.types_of(ed.sources)))); break;
        }
    }

    std::vector<EdgeId> rest;
    for (EdgeId e : order)
        if (!done.count(e)) rest.push_back(e);
    if (!rest.empty()) {
        std::set<EdgeId> pending(rest.begin(), rest.end());
        NetIndex idx(h);
        Edge pe;
        pe.label = Label::op("pending");
        for (std::size_t i = 0; i < ledger.size(); ++i)
            if (pending.count(ledger_owner[i])) pe.sources.push_back(ledger[i]);
        for (const auto& [v, c] : ct) {
            auto p = idx.producer(v);
            if (p && pending.count(p->edge)) pe.sources.push_back(c);
        }
        for (auto a : h.inputs())
            if (!ct.count(a)) {
                VertexId x = b.fresh(cotangent_type(h.vertex(a).type));
                ct[a] = x;
                pe.targets.push_back(x);
            }
        out.add_edge(std::move(pe));
    }
    for (auto a : h.inputs()) b.output(ct.at(a));
    return out;
}

std::vector<EdgeId> reverse_fringe(const Hypernet& h, const std::vector<EdgeId>& processed) {
    std::set<EdgeId> done(processed.begin(), processed.end());
    NetIndex idx(h);
    std::vector<EdgeId> out;
    for (EdgeId e : idx.edges_at(kOutermost)) {
        if (done.count(e)) continue;
        bool ready = true;
        for (auto v : h.edge(e).targets) {
            auto c = idx.consumer(v);
            if (c && !done.count(c->edge)) ready = false;
        }
        if (ready) out.push_back(e);
    }
    return out;
}

Hypernet reverse_pass(const Hypernet& h, const PullbackRegistry& reg) {
    auto order = canonical_order(h);
    std::reverse(order.begin(), order.end());
    return reverse_partial(h, order, reg);
}

namespace {

Hypernet adjoint_impl(const Hypernet& h, std::size_t packed_prefix, bool packed, const PullbackRegistry& reg) {
    Hypernet fwd = forward_pass(h, reg);
    Hypernet rev = reverse_pass(h, reg);
    const TypeList in = h.input_types();
    const TypeList res = h.output_types();
    const std::size_t nres = res.size();
    Hypernet out;
    NetBuilder b(out);
    auto x = b.inputs(forward_types(in));
    auto outs = b.embed(fwd, x);
    std::vector<VertexId> primal(outs.begin(), outs.begin() + static_cast<std::ptrdiff_t>(nres));
    std::vector<VertexId> ledger(outs.begin() + static_cast<std::ptrdiff_t>(nres), outs.end());
    VertexId bp = b.box(ledger, cotangent_types(res), [&](NetBuilder& in_b, std::span<const VertexId> iw) {
        auto r = in_b.embed(rev, iw);
        if (!packed) return r;
        std::vector<VertexId> captured(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(packed_prefix));
        std::vector<VertexId> result = in_b.op(Label::op("pack"), captured, TypeList{Type::bundle()});
        result.insert(result.end(), r.begin() + static_cast<std::ptrdiff_t>(packed_prefix), r.end());
        return result;
    });
    b.outputs(primal);
    b.output(bp);
    return out;
}

}  // namespace

Hypernet adjoint(const Hypernet& h, const PullbackRegistry& reg) { return adjoint_impl(h, 0, false, reg); }

}  // namespace hyperad
