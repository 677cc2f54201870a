#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperad/signature.hpp"
#include "hyperad/types.hpp"

namespace hyperad {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Parent of outermost items. Real ids start at 1.
inline constexpr EdgeId kOutermost = 0;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ill-formed constructor arguments (signature or arity mismatch).
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Interface types of a sequential composition do not line up.
class CompositionError : public Error {
public:
    using Error::Error;
};

struct Vertex {
    Type type;
    EdgeId parent = kOutermost;
};

struct Edge {
    Label label;
    std::vector<VertexId> sources;
    std::vector<VertexId> targets;
    EdgeId parent = kOutermost;
    /// Interface orderings of the inner graph; only Box edges have them.
    std::vector<VertexId> inner_inputs;
    std::vector<VertexId> inner_outputs;
};

/// A hierarchical hypergraph with interface orderings. Operations in this
/// library treat values as immutable and return new nets; the mutators below
/// are the low-level surface those operations are written against.
class Hypernet {
public:
    const std::map<VertexId, Vertex>& vertices() const { return vertices_; }
    const std::map<EdgeId, Edge>& edges() const { return edges_; }

    const Vertex& vertex(VertexId v) const;
    const Edge& edge(EdgeId e) const;
    bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
    bool has_edge(EdgeId e) const { return edges_.count(e) != 0; }

    /// Interface orderings of a level: `kOutermost` or a Box edge.
    const std::vector<VertexId>& inputs(EdgeId level = kOutermost) const;
    const std::vector<VertexId>& outputs(EdgeId level = kOutermost) const;
    std::vector<VertexId>& inputs_mut(EdgeId level = kOutermost);
    std::vector<VertexId>& outputs_mut(EdgeId level = kOutermost);

    TypeList input_types(EdgeId level = kOutermost) const;
    TypeList output_types(EdgeId level = kOutermost) const;
    TypeList types_of(std::span<const VertexId> vs) const;

    VertexId add_vertex(Type type, EdgeId parent);
    /// Reserves an edge id; the edge is inserted with the given data.
    EdgeId add_edge(Edge e);
    Edge& edge_mut(EdgeId e);
    Vertex& vertex_mut(VertexId v);
    void remove_edge(EdgeId e) { edges_.erase(e); }
    void remove_vertex(VertexId v) { vertices_.erase(v); }

    /// Replaces every occurrence of `from` (edge incidences and all interface
    /// lists) by `to`, then removes `from`.
    void merge_vertex(VertexId from, VertexId to);

    /// Items whose parent is exactly `level`.
    std::vector<EdgeId> edges_at(EdgeId level) const;
    std::vector<VertexId> vertices_at(EdgeId level) const;

    /// Number of hierarchy levels above the item (0 for outermost items).
    std::size_t depth_of_edge(EdgeId e) const;

    bool empty() const { return vertices_.empty() && edges_.empty(); }

private:
    std::map<VertexId, Vertex> vertices_;
    std::map<EdgeId, Edge> edges_;
    std::vector<VertexId> inputs_;
    std::vector<VertexId> outputs_;
    std::uint32_t next_id_ = 1;
};

/// Producer/consumer lookup for a net. Rebuilt on demand; cheap for the sizes
/// handled here.
class NetIndex {
public:
    struct Port {
        EdgeId edge = 0;
        std::size_t position = 0;
    };

    explicit NetIndex(const Hypernet& net);

    std::optional<Port> producer(VertexId v) const;
    std::optional<Port> consumer(VertexId v) const;

    /// Edges at a level in creation order.
    const std::vector<EdgeId>& edges_at(EdgeId level) const;
    const std::vector<VertexId>& vertices_at(EdgeId level) const;

    /// All levels, outermost first, then by depth and parent edge id.
    const std::vector<EdgeId>& levels() const { return levels_; }

private:
    std::map<VertexId, Port> producer_;
    std::map<VertexId, Port> consumer_;
    std::map<EdgeId, std::vector<EdgeId>> level_edges_;
    std::map<EdgeId, std::vector<VertexId>> level_vertices_;
    std::vector<EdgeId> levels_;
};

/// Imperative construction of one level of a net. Wires are vertex ids; the
/// builder does not enforce linearity, `validate` does.
class NetBuilder {
public:
    using BodyFn = std::function<std::vector<VertexId>(NetBuilder&, std::span<const VertexId>)>;

    explicit NetBuilder(Hypernet& net, EdgeId level = kOutermost) : net_(&net), level_(level) {}

    Hypernet& net() { return *net_; }
    EdgeId level() const { return level_; }

    VertexId input(const Type& t);
    std::vector<VertexId> inputs(const TypeList& ts);
    void output(VertexId v);
    void outputs(std::span<const VertexId> vs);

    VertexId fresh(const Type& t) { return net_->add_vertex(t, level_); }

    /// Adds an Op edge; result types come from the signature unless given.
    std::vector<VertexId> op(const Label& label, std::vector<VertexId> sources,
                             std::optional<TypeList> result_types = std::nullopt);
    VertexId op1(const std::string& name, std::vector<VertexId> sources);
    VertexId constant(double value);
    std::pair<VertexId, VertexId> copy(VertexId v);
    void discard(VertexId v);
    std::vector<VertexId> eval(VertexId fn, std::span<const VertexId> args);

    /// Adds a Box edge capturing `captured`; the body receives the inner
    /// inputs (captured copies followed by the bound wires) and returns the
    /// inner outputs. Returns the arrow-typed target.
    VertexId box(std::span<const VertexId> captured, const TypeList& bound, const BodyFn& body);

    /// Inlines `other` at this level, identifying its inputs with `sources`.
    /// Returns the wires corresponding to its outputs.
    std::vector<VertexId> embed(const Hypernet& other, std::span<const VertexId> sources);
    std::vector<VertexId> embed(const Hypernet& other, std::span<const VertexId> sources,
                                std::map<VertexId, VertexId>& vmap, std::map<EdgeId, EdgeId>& emap);

    /// Re-creates an edge of `host` (with its inner graph) on new sources.
    std::vector<VertexId> replicate(const Hypernet& host, EdgeId e, std::span<const VertexId> sources);

private:
    Hypernet* net_;
    EdgeId level_;
};

/// Copies the inner graph of a Box edge into a standalone net whose
/// interface is the box's inner interface.
Hypernet inner_net(const Hypernet& host, EdgeId box);

/// Copies the given same-level edges of `host` (with inner graphs) into a
/// standalone net with the given interface. `vmap`/`emap` receive the
/// copy -> host correspondence.
Hypernet extract(const Hypernet& host, std::span<const EdgeId> edges,
                 std::span<const VertexId> inputs, std::span<const VertexId> outputs,
                 std::map<VertexId, VertexId>* vmap = nullptr, std::map<EdgeId, EdgeId>* emap = nullptr);

}  // namespace hyperad
