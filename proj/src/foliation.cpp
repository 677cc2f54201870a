#include "hyperad/foliation.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "hyperad/construct.hpp"

namespace hyperad {

namespace {

constexpr std::size_t kNoSource = std::numeric_limits<std::size_t>::max();

std::size_t index_of(const std::vector<VertexId>& wires, VertexId v) {
    auto it = std::find(wires.begin(), wires.end(), v);
    return it == wires.end() ? kNoSource : static_cast<std::size_t>(it - wires.begin());
}

/// Where an edge's operands sit once gathered: the leftmost current position
/// of any source, or the end of the list for nullary edges.
std::size_t gather_position(const std::vector<VertexId>& wires, const Edge& e) {
    if (e.sources.empty()) return wires.size();
    std::size_t p = kNoSource;
    for (auto v : e.sources) p = std::min(p, index_of(wires, v));
    return p;
}

/// Wire list with `e`'s sources pulled together (in order) at their gather
/// position.
std::vector<VertexId> gathered(const std::vector<VertexId>& wires, const Edge& e, std::size_t p) {
    std::vector<VertexId> rest;
    for (auto v : wires)
        if (std::find(e.sources.begin(), e.sources.end(), v) == e.sources.end()) rest.push_back(v);
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(std::min(p, rest.size())), e.sources.begin(),
                e.sources.end());
    return rest;
}

std::vector<VertexId> after_edge(std::vector<VertexId> gathered_wires, const Edge& e, std::size_t p) {
    auto first = gathered_wires.begin() + static_cast<std::ptrdiff_t>(p);
    gathered_wires.erase(first, first + static_cast<std::ptrdiff_t>(e.sources.size()));
    gathered_wires.insert(gathered_wires.begin() + static_cast<std::ptrdiff_t>(p), e.targets.begin(),
                          e.targets.end());
    return gathered_wires;
}

/// Appends unary swaps turning `current` into `desired` (a permutation).
void emit_swaps(const Hypernet& h, std::vector<VertexId>& current, const std::vector<VertexId>& desired,
                std::vector<Leaf>& leaves) {
    for (std::size_t i = 0; i < desired.size(); ++i) {
        std::size_t j = index_of(current, desired[i]);
        while (j > i) {
            Leaf leaf;
            leaf.kind = Leaf::Kind::Swap;
            leaf.wires = h.types_of(current);
            leaf.position = j - 1;
            leaves.push_back(std::move(leaf));
            std::swap(current[j - 1], current[j]);
            --j;
        }
    }
}

}  // namespace

std::vector<EdgeId> canonical_order(const Hypernet& h, EdgeId level) {
    std::vector<EdgeId> pending = h.edges_at(level);
    std::vector<VertexId> wires = h.inputs(level);
    std::vector<EdgeId> order;
    order.reserve(pending.size());
    while (!pending.empty()) {
        std::size_t best = pending.size();
        std::tuple<std::string, std::size_t, EdgeId> best_key;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const Edge& e = h.edge(pending[i]);
            bool ready = std::all_of(e.sources.begin(), e.sources.end(),
                                     [&](VertexId v) { return index_of(wires, v) != kNoSource; });
            if (!ready) continue;
            std::size_t first = e.sources.empty() ? kNoSource : index_of(wires, e.sources.front());
            auto key = std::make_tuple(e.label.to_string(), first, pending[i]);
            if (best == pending.size() || key < best_key) {
                best = i;
                best_key = std::move(key);
            }
        }
        if (best == pending.size()) throw Error("canonical_order: level is cyclic or ill-formed");
        EdgeId id = pending[best];
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
        const Edge& e = h.edge(id);
        std::size_t p = gather_position(wires, e);
        wires = after_edge(gathered(wires, e, p), e, p);
        order.push_back(id);
    }
    return order;
}

std::size_t Foliation::atom_count() const {
    std::size_t n = 0;
    for (const auto& l : leaves)
        if (l.kind == Leaf::Kind::Atom) n += 1 + (l.body ? l.body->atom_count() : 0);
    return n;
}

Foliation foliate(const Hypernet& h) {
    Foliation f;
    f.inputs = h.input_types();
    f.outputs = h.output_types();
    std::vector<VertexId> wires = h.inputs();
    for (EdgeId id : canonical_order(h)) {
        const Edge& e = h.edge(id);
        std::size_t p = gather_position(wires, e);
        auto want = gathered(wires, e, p);
        emit_swaps(h, wires, want, f.leaves);
        Leaf leaf;
        leaf.kind = Leaf::Kind::Atom;
        leaf.wires = h.types_of(wires);
        leaf.position = p;
        leaf.edge = id;
        leaf.label = e.label;
        leaf.operands = h.types_of(e.sources);
        leaf.results = h.types_of(e.targets);
        if (e.label.kind == EdgeKind::Box) {
            leaf.body = std::make_shared<const Foliation>(foliate(inner_net(h, id)));
            leaf.bound = e.inner_inputs.size() - e.sources.size();
        }
        f.leaves.push_back(std::move(leaf));
        wires = after_edge(wires, e, p);
    }
    emit_swaps(h, wires, h.outputs(), f.leaves);
    return f;
}

Hypernet recompose(const Foliation& f) {
    Hypernet net = identity_net(f.inputs);
    for (const auto& leaf : f.leaves) {
        if (leaf.kind == Leaf::Kind::Swap) {
            net = compose_seq(net, swap_net(leaf.wires, leaf.position));
            continue;
        }
        Hypernet atom = leaf.label.kind == EdgeKind::Box ? abstraction(recompose(*leaf.body), leaf.bound)
                                                         : build_atomic(leaf.label, leaf.operands, leaf.results);
        TypeList left(leaf.wires.begin(), leaf.wires.begin() + static_cast<std::ptrdiff_t>(leaf.position));
        TypeList right(leaf.wires.begin() + static_cast<std::ptrdiff_t>(leaf.position + leaf.operands.size()),
                       leaf.wires.end());
        net = compose_seq(net, compose_par(compose_par(identity_net(left), atom), identity_net(right)));
    }
    return net;
}

}  // namespace hyperad
