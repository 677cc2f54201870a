#include "hyperad/dpo.hpp"

#include <set>

#include "hyperad/validate.hpp"

namespace hyperad {

RewriteRule RewriteRule::reversed() const { return {name + "^-1", rhs, lhs}; }

std::optional<std::string> RewriteRule::check() const {
    if (lhs.input_types() != rhs.input_types()) return name + ": input interfaces differ";
    if (lhs.output_types() != rhs.output_types()) return name + ": output interfaces differ";
    for (const Hypernet* side : {&lhs, &rhs}) {
        auto v = validate(*side);
        if (!v.empty()) return name + ": invalid side [" + v.front().clause + "] " + v.front().detail;
    }
    return std::nullopt;
}

std::vector<Match> find_matches(const RewriteRule& rule, const Hypernet& host, std::size_t limit) {
    MatchOptions opt;
    opt.limit = limit;
    return find_embeddings(rule.lhs, host, opt);
}

std::optional<std::string> check_match(const RewriteRule& rule, const Hypernet& host, const Match& m) {
    const Hypernet& l = rule.lhs;
    std::set<VertexId> vimg;
    std::set<EdgeId> eimg;
    for (const auto& [lv, v] : l.vertices()) {
        auto it = m.vertices.find(lv);
        if (it == m.vertices.end()) return "vertex v" + std::to_string(lv) + " of L is unmapped";
        if (!host.has_vertex(it->second)) return "image of v" + std::to_string(lv) + " is not in the host";
        if (!vimg.insert(it->second).second) return "match is not injective on vertices";
        if (host.vertex(it->second).type != v.type) return "type mismatch at v" + std::to_string(lv);
    }
    for (const auto& [le, e] : l.edges()) {
        auto it = m.edges.find(le);
        if (it == m.edges.end()) return "edge e" + std::to_string(le) + " of L is unmapped";
        if (!host.has_edge(it->second)) return "image of e" + std::to_string(le) + " is not in the host";
        if (!eimg.insert(it->second).second) return "match is not injective on edges";
        const Edge& he = host.edge(it->second);
        if (he.label.kind != e.label.kind || (e.label.kind != EdgeKind::Box && !(he.label == e.label)))
            return "label mismatch at e" + std::to_string(le);
        auto same = [&](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
            if (a.size() != b.size()) return false;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (m.vertices.at(a[i]) != b[i]) return false;
            return true;
        };
        if (!same(e.sources, he.sources) || !same(e.targets, he.targets))
            return "incidence not preserved at e" + std::to_string(le);
        if (e.label.kind == EdgeKind::Box &&
            (!same(e.inner_inputs, he.inner_inputs) || !same(e.inner_outputs, he.inner_outputs)))
            return "inner interface not preserved at e" + std::to_string(le);
        EdgeId want_parent = e.parent == kOutermost ? m.level : m.edges.at(e.parent);
        if (he.parent != want_parent) return "hierarchy not preserved at e" + std::to_string(le);
    }
    for (const auto& [lv, v] : l.vertices()) {
        EdgeId want_parent = v.parent == kOutermost ? m.level : m.edges.at(v.parent);
        if (host.vertex(m.vertices.at(lv)).parent != want_parent)
            return "hierarchy not preserved at v" + std::to_string(lv);
    }
    // Inner levels of matched boxes must be covered exactly.
    for (const auto& [le, e] : l.edges()) {
        if (e.label.kind != EdgeKind::Box) continue;
        EdgeId hb = m.edges.at(le);
        if (host.edges_at(hb).size() != l.edges_at(le).size() ||
            host.vertices_at(hb).size() != l.vertices_at(le).size())
            return "box e" + std::to_string(le) + " matched a box with a different interior";
    }
    // Gluing condition on the outermost level of L.
    std::set<VertexId> iface(l.inputs().begin(), l.inputs().end());
    iface.insert(l.outputs().begin(), l.outputs().end());
    const auto& hin = host.inputs(m.level);
    const auto& hout = host.outputs(m.level);
    NetIndex idx(host);
    for (VertexId lv : l.vertices_at(kOutermost)) {
        if (iface.count(lv)) continue;
        VertexId hv = m.vertices.at(lv);
        if (std::find(hin.begin(), hin.end(), hv) != hin.end() || std::find(hout.begin(), hout.end(), hv) != hout.end())
            return "dangling: v" + std::to_string(hv) + " is on the host interface";
        auto pr = idx.producer(hv);
        auto co = idx.consumer(hv);
        if ((pr && !eimg.count(pr->edge)) || (co && !eimg.count(co->edge)))
            return "dangling: v" + std::to_string(hv) + " has an incidence outside the match";
    }
    return std::nullopt;
}

void remove_edge_deep(Hypernet& h, EdgeId e) {
    if (h.edge(e).label.kind == EdgeKind::Box) {
        for (EdgeId c : h.edges_at(e)) remove_edge_deep(h, c);
        for (VertexId v : h.vertices_at(e)) h.remove_vertex(v);
    }
    h.remove_edge(e);
}

Context pushout_complement(const Hypernet& host, const RewriteRule& rule, const Match& m) {
    const Hypernet& l = rule.lhs;
    Context ctx;
    ctx.net = host;
    ctx.level = m.level;
    for (EdgeId le : l.edges_at(kOutermost)) remove_edge_deep(ctx.net, m.edges.at(le));
    std::set<VertexId> iface(l.inputs().begin(), l.inputs().end());
    iface.insert(l.outputs().begin(), l.outputs().end());
    for (VertexId lv : l.vertices_at(kOutermost))
        if (!iface.count(lv)) ctx.net.remove_vertex(m.vertices.at(lv));

    for (VertexId lv : l.inputs()) ctx.interface.push_back(m.vertices.at(lv));
    std::set<VertexId> input_role(ctx.interface.begin(), ctx.interface.end());
    NetIndex idx(ctx.net);
    for (VertexId lv : l.outputs()) {
        VertexId hv = m.vertices.at(lv);
        if (!input_role.count(hv)) {
            ctx.interface.push_back(hv);
            continue;
        }
        VertexId w = ctx.net.add_vertex(ctx.net.vertex(hv).type, ctx.level);
        if (auto co = idx.consumer(hv)) ctx.net.edge_mut(co->edge).sources[co->position] = w;
        for (auto& x : ctx.net.outputs_mut(ctx.level))
            if (x == hv) x = w;
        ctx.interface.push_back(w);
    }
    return ctx;
}

Rewritten pushout_glue(const Context& ctx, const RewriteRule& rule) {
    const Hypernet& r = rule.rhs;
    const std::size_t nin = r.inputs().size();
    if (ctx.interface.size() != nin + r.outputs().size())
        throw GlueError(rule.name + ": interface has " + std::to_string(ctx.interface.size()) + " positions, R needs " +
                        std::to_string(nin + r.outputs().size()));
    Rewritten out;
    out.net = ctx.net;
    std::map<VertexId, VertexId> vmap;
    std::map<EdgeId, EdgeId> emap;
    NetBuilder b(out.net, ctx.level);
    std::vector<VertexId> sources(ctx.interface.begin(), ctx.interface.begin() + static_cast<std::ptrdiff_t>(nin));
    auto routs = b.embed(r, sources, vmap, emap);

    std::map<VertexId, VertexId> renamed;
    auto resolve = [&](VertexId v) {
        while (renamed.count(v)) v = renamed.at(v);
        return v;
    };
    std::set<VertexId> touched;
    for (std::size_t k = 0; k < routs.size(); ++k) {
        VertexId t = resolve(routs[k]);
        VertexId g = resolve(ctx.interface[nin + k]);
        if (out.net.vertex(t).type != out.net.vertex(g).type)
            throw GlueError(rule.name + ": type clash gluing output position " + std::to_string(k));
        if (t != g) {
            out.net.merge_vertex(g, t);
            renamed[g] = t;
        }
        touched.insert(t);
    }
    for (VertexId v : sources) touched.insert(resolve(v));

    const auto& lin = out.net.inputs(ctx.level);
    const auto& lout = out.net.outputs(ctx.level);
    for (VertexId v : touched) {
        std::size_t producers = 0, consumers = 0;
        for (const auto& [id, e] : out.net.edges()) {
            producers += static_cast<std::size_t>(std::count(e.targets.begin(), e.targets.end(), v));
            consumers += static_cast<std::size_t>(std::count(e.sources.begin(), e.sources.end(), v));
        }
        producers += static_cast<std::size_t>(std::count(lin.begin(), lin.end(), v));
        consumers += static_cast<std::size_t>(std::count(lout.begin(), lout.end(), v));
        if (producers > 1 || consumers > 1)
            throw GlueError(rule.name + ": gluing makes v" + std::to_string(v) + " non-linear (" +
                            std::to_string(producers) + " producers, " + std::to_string(consumers) + " consumers)");
    }

    out.residual.level = ctx.level;
    for (const auto& [rv, hv] : vmap) out.residual.vertices[rv] = resolve(hv);
    out.residual.edges = emap;
    return out;
}

Rewritten apply(const RewriteRule& rule, const Hypernet& host, const Match& m) {
    if (auto err = check_match(rule, host, m)) throw MatchError(rule.name + ": " + *err);
    return pushout_glue(pushout_complement(host, rule, m), rule);
}

}  // namespace hyperad
