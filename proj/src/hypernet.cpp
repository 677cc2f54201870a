#include "hyperad/hypernet.hpp"

#include <algorithm>

namespace hyperad {

const Vertex& Hypernet::vertex(VertexId v) const {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw std::out_of_range("no vertex " + std::to_string(v));
    return it->second;
}

const Edge& Hypernet::edge(EdgeId e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw std::out_of_range("no edge " + std::to_string(e));
    return it->second;
}

Edge& Hypernet::edge_mut(EdgeId e) {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw std::out_of_range("no edge " + std::to_string(e));
    return it->second;
}

Vertex& Hypernet::vertex_mut(VertexId v) {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw std::out_of_range("no vertex " + std::to_string(v));
    return it->second;
}

const std::vector<VertexId>& Hypernet::inputs(EdgeId level) const {
    return level == kOutermost ? inputs_ : edge(level).inner_inputs;
}

const std::vector<VertexId>& Hypernet::outputs(EdgeId level) const {
    return level == kOutermost ? outputs_ : edge(level).inner_outputs;
}

std::vector<VertexId>& Hypernet::inputs_mut(EdgeId level) {
    return level == kOutermost ? inputs_ : edge_mut(level).inner_inputs;
}

std::vector<VertexId>& Hypernet::outputs_mut(EdgeId level) {
    return level == kOutermost ? outputs_ : edge_mut(level).inner_outputs;
}

TypeList Hypernet::types_of(std::span<const VertexId> vs) const {
    TypeList out;
    out.reserve(vs.size());
    for (auto v : vs) out.push_back(vertex(v).type);
    return out;
}

TypeList Hypernet::input_types(EdgeId level) const { return types_of(inputs(level)); }
TypeList Hypernet::output_types(EdgeId level) const { return types_of(outputs(level)); }

VertexId Hypernet::add_vertex(Type type, EdgeId parent) {
    VertexId id = next_id_++;
    vertices_.emplace(id, Vertex{std::move(type), parent});
    return id;
}

EdgeId Hypernet::add_edge(Edge e) {
    EdgeId id = next_id_++;
    edges_.emplace(id, std::move(e));
    return id;
}

void Hypernet::merge_vertex(VertexId from, VertexId to) {
    if (from == to) return;
    auto swap_in = [&](std::vector<VertexId>& vs) {
        for (auto& v : vs)
            if (v == from) v = to;
    };
    for (auto& [id, e] : edges_) {
        swap_in(e.sources);
        swap_in(e.targets);
        swap_in(e.inner_inputs);
        swap_in(e.inner_outputs);
    }
    swap_in(inputs_);
    swap_in(outputs_);
    vertices_.erase(from);
}

std::vector<EdgeId> Hypernet::edges_at(EdgeId level) const {
    std::vector<EdgeId> out;
    for (const auto& [id, e] : edges_)
        if (e.parent == level) out.push_back(id);
    return out;
}

std::vector<VertexId> Hypernet::vertices_at(EdgeId level) const {
    std::vector<VertexId> out;
    for (const auto& [id, v] : vertices_)
        if (v.parent == level) out.push_back(id);
    return out;
}

std::size_t Hypernet::depth_of_edge(EdgeId e) const {
    std::size_t d = 0;
    EdgeId p = edge(e).parent;
    while (p != kOutermost && d <= edges_.size()) {
        ++d;
        p = edge(p).parent;
    }
    return d;
}

NetIndex::NetIndex(const Hypernet& net) {
    for (const auto& [id, e] : net.edges()) {
        for (std::size_t i = 0; i < e.sources.size(); ++i) consumer_.emplace(e.sources[i], Port{id, i});
        for (std::size_t i = 0; i < e.targets.size(); ++i) producer_.emplace(e.targets[i], Port{id, i});
        level_edges_[e.parent].push_back(id);
    }
    for (const auto& [id, v] : net.vertices()) level_vertices_[v.parent].push_back(id);

    std::vector<std::pair<std::size_t, EdgeId>> lv{{0, kOutermost}};
    for (const auto& [id, e] : net.edges())
        if (e.label.kind == EdgeKind::Box) lv.emplace_back(net.depth_of_edge(id) + 1, id);
    std::stable_sort(lv.begin(), lv.end());
    for (const auto& [d, id] : lv) levels_.push_back(id);
}

std::optional<NetIndex::Port> NetIndex::producer(VertexId v) const {
    auto it = producer_.find(v);
    if (it == producer_.end()) return std::nullopt;
    return it->second;
}

std::optional<NetIndex::Port> NetIndex::consumer(VertexId v) const {
    auto it = consumer_.find(v);
    if (it == consumer_.end()) return std::nullopt;
    return it->second;
}

const std::vector<EdgeId>& NetIndex::edges_at(EdgeId level) const {
    static const std::vector<EdgeId> none;
    auto it = level_edges_.find(level);
    return it == level_edges_.end() ? none : it->second;
}

const std::vector<VertexId>& NetIndex::vertices_at(EdgeId level) const {
    static const std::vector<VertexId> none;
    auto it = level_vertices_.find(level);
    return it == level_vertices_.end() ? none : it->second;
}

namespace {

/// Copies everything strictly inside `src_level` of `src` into `dst_level`
/// of `dst`. Vertices already present in `vmap` are reused.
void copy_level(const Hypernet& src, EdgeId src_level, Hypernet& dst, EdgeId dst_level,
                std::map<VertexId, VertexId>& vmap, std::map<EdgeId, EdgeId>& emap) {
    auto map_vertex = [&](VertexId v) {
        auto it = vmap.find(v);
        if (it != vmap.end()) return it->second;
        VertexId nv = dst.add_vertex(src.vertex(v).type, dst_level);
        vmap.emplace(v, nv);
        return nv;
    };
    for (VertexId v : src.vertices_at(src_level)) map_vertex(v);
    for (EdgeId e : src.edges_at(src_level)) {
        const Edge& se = src.edge(e);
        Edge ne;
        ne.label = se.label;
        ne.parent = dst_level;
        for (auto v : se.sources) ne.sources.push_back(map_vertex(v));
        for (auto v : se.targets) ne.targets.push_back(map_vertex(v));
        EdgeId id = dst.add_edge(std::move(ne));
        emap.emplace(e, id);
        if (se.label.kind == EdgeKind::Box) {
            copy_level(src, e, dst, id, vmap, emap);
            Edge& de = dst.edge_mut(id);
            for (auto v : se.inner_inputs) de.inner_inputs.push_back(vmap.at(v));
            for (auto v : se.inner_outputs) de.inner_outputs.push_back(vmap.at(v));
        }
    }
}

}  // namespace

Hypernet inner_net(const Hypernet& host, EdgeId box) {
    Hypernet out;
    std::map<VertexId, VertexId> vmap;
    std::map<EdgeId, EdgeId> emap;
    copy_level(host, box, out, kOutermost, vmap, emap);
    for (auto v : host.edge(box).inner_inputs) out.inputs_mut().push_back(vmap.at(v));
    for (auto v : host.edge(box).inner_outputs) out.outputs_mut().push_back(vmap.at(v));
    return out;
}

Hypernet extract(const Hypernet& host, std::span<const EdgeId> edges, std::span<const VertexId> inputs,
                 std::span<const VertexId> outputs, std::map<VertexId, VertexId>* vmap_out,
                 std::map<EdgeId, EdgeId>* emap_out) {
    Hypernet out;
    std::map<VertexId, VertexId> vmap;  // host -> copy
    std::map<EdgeId, EdgeId> emap;
    auto map_vertex = [&](VertexId v) {
        auto it = vmap.find(v);
        if (it != vmap.end()) return it->second;
        VertexId nv = out.add_vertex(host.vertex(v).type, kOutermost);
        vmap.emplace(v, nv);
        return nv;
    };
    for (auto v : inputs) out.inputs_mut().push_back(map_vertex(v));
    for (EdgeId e : edges) {
        const Edge& se = host.edge(e);
        Edge ne;
        ne.label = se.label;
        for (auto v : se.sources) ne.sources.push_back(map_vertex(v));
        for (auto v : se.targets) ne.targets.push_back(map_vertex(v));
        EdgeId id = out.add_edge(std::move(ne));
        emap.emplace(e, id);
        if (se.label.kind == EdgeKind::Box) {
            copy_level(host, e, out, id, vmap, emap);
            Edge& de = out.edge_mut(id);
            for (auto v : se.inner_inputs) de.inner_inputs.push_back(vmap.at(v));
            for (auto v : se.inner_outputs) de.inner_outputs.push_back(vmap.at(v));
        }
    }
    for (auto v : outputs) out.outputs_mut().push_back(map_vertex(v));
    if (vmap_out)
        for (const auto& [h, c] : vmap) (*vmap_out)[c] = h;
    if (emap_out)
        for (const auto& [h, c] : emap) (*emap_out)[c] = h;
    return out;
}

VertexId NetBuilder::input(const Type& t) {
    VertexId v = fresh(t);
    net_->inputs_mut(level_).push_back(v);
    return v;
}

std::vector<VertexId> NetBuilder::inputs(const TypeList& ts) {
    std::vector<VertexId> out;
    for (const auto& t : ts) out.push_back(input(t));
    return out;
}

void NetBuilder::output(VertexId v) { net_->outputs_mut(level_).push_back(v); }

void NetBuilder::outputs(std::span<const VertexId> vs) {
    for (auto v : vs) output(v);
}

std::vector<VertexId> NetBuilder::op(const Label& label, std::vector<VertexId> sources,
                                     std::optional<TypeList> result_types) {
    TypeList rt;
    if (result_types) {
        rt = *result_types;
    } else {
        auto r = Signature::builtin().results_of(label.name);
        if (!r) throw ConstructionError("cannot infer result types of '" + label.name + "'");
        rt = *r;
    }
    Edge e;
    e.label = label;
    e.sources = std::move(sources);
    e.parent = level_;
    for (const auto& t : rt) e.targets.push_back(fresh(t));
    auto targets = e.targets;
    net_->add_edge(std::move(e));
    return targets;
}

VertexId NetBuilder::op1(const std::string& name, std::vector<VertexId> sources) {
    return op(Label::op(name), std::move(sources)).at(0);
}

VertexId NetBuilder::constant(double value) { return op(Label::constant(value), {}).at(0); }

std::pair<VertexId, VertexId> NetBuilder::copy(VertexId v) {
    const Type t = net_->vertex(v).type;
    auto ts = op(Label::copy(), {v}, TypeList{t, t});
    return {ts[0], ts[1]};
}

void NetBuilder::discard(VertexId v) { op(Label::discard(), {v}, TypeList{}); }

std::vector<VertexId> NetBuilder::eval(VertexId fn, std::span<const VertexId> args) {
    const Type& ft = net_->vertex(fn).type;
    if (!ft.is_arrow()) throw ConstructionError("eval of a non-function wire of type " + ft.to_string());
    std::vector<VertexId> srcs{fn};
    srcs.insert(srcs.end(), args.begin(), args.end());
    return op(Label::eval(), std::move(srcs), ft.results());
}

VertexId NetBuilder::box(std::span<const VertexId> captured, const TypeList& bound, const BodyFn& body) {
    Edge e;
    e.label = Label::box();
    e.sources.assign(captured.begin(), captured.end());
    e.parent = level_;
    EdgeId id = net_->add_edge(std::move(e));
    NetBuilder inner(*net_, id);
    std::vector<VertexId> ins;
    for (auto v : captured) ins.push_back(inner.input(net_->vertex(v).type));
    for (const auto& t : bound) ins.push_back(inner.input(t));
    auto outs = body(inner, ins);
    inner.outputs(outs);
    VertexId target = fresh(Type::arrow(bound, net_->types_of(outs)));
    net_->edge_mut(id).targets.push_back(target);
    return target;
}

std::vector<VertexId> NetBuilder::embed(const Hypernet& other, std::span<const VertexId> sources) {
    std::map<VertexId, VertexId> vmap;
    std::map<EdgeId, EdgeId> emap;
    return embed(other, sources, vmap, emap);
}

std::vector<VertexId> NetBuilder::embed(const Hypernet& other, std::span<const VertexId> sources,
                                        std::map<VertexId, VertexId>& vmap, std::map<EdgeId, EdgeId>& emap) {
    const auto& ins = other.inputs();
    if (ins.size() != sources.size())
        throw CompositionError("embedding a net with " + std::to_string(ins.size()) + " inputs on " +
                               std::to_string(sources.size()) + " wires");
    for (std::size_t i = 0; i < ins.size(); ++i) vmap[ins[i]] = sources[i];
    copy_level(other, kOutermost, *net_, level_, vmap, emap);
    std::vector<VertexId> outs;
    for (auto v : other.outputs()) outs.push_back(vmap.at(v));
    return outs;
}

std::vector<VertexId> NetBuilder::replicate(const Hypernet& host, EdgeId e, std::span<const VertexId> sources) {
    const Edge& he = host.edge(e);
    if (he.label.kind != EdgeKind::Box) {
        return op(he.label, std::vector<VertexId>(sources.begin(), sources.end()), host.types_of(he.targets));
    }
    Hypernet body = inner_net(host, e);
    TypeList all = body.input_types();
    TypeList bound(all.begin() + static_cast<std::ptrdiff_t>(he.sources.size()), all.end());
    return {box(sources, bound, [&](NetBuilder& b, std::span<const VertexId> in) { return b.embed(body, in); })};
}

}  // namespace hyperad
