#include "hyperad/serialize.hpp"

#include <deque>
#include <sstream>

#include "hyperad/foliation.hpp"

namespace hyperad {

using nlohmann::json;

namespace {

struct Numbering {
    std::map<VertexId, std::uint32_t> v;
    std::map<EdgeId, std::uint32_t> e;
    std::vector<VertexId> vorder;
    std::vector<EdgeId> eorder;

    void vertex(VertexId x) {
        if (v.emplace(x, static_cast<std::uint32_t>(v.size() + 1)).second) vorder.push_back(x);
    }

    void level(const Hypernet& h, EdgeId lvl) {
        for (auto x : h.inputs(lvl)) vertex(x);
        for (EdgeId id : canonical_order(h, lvl)) {
            const Edge& ed = h.edge(id);
            for (auto x : ed.sources) vertex(x);
            e.emplace(id, static_cast<std::uint32_t>(e.size() + 1));
            eorder.push_back(id);
            if (ed.label.kind == EdgeKind::Box) level(h, id);
            for (auto x : ed.targets) vertex(x);
        }
        for (auto x : h.outputs(lvl)) vertex(x);
        for (auto x : h.vertices_at(lvl)) vertex(x);
    }
};

json ids(const std::vector<VertexId>& vs, const Numbering& n) {
    json a = json::array();
    for (auto x : vs) a.push_back(n.v.at(x));
    return a;
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw SerializationError(where + ": missing field '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw SerializationError(where + ": field '" + key + "' has the wrong shape");
    }
}

}  // namespace

json to_json(const Hypernet& h) {
    Numbering n;
    n.level(h, kOutermost);
    json doc;
    doc["version"] = kFormatVersion;
    json vs = json::array();
    for (auto x : n.vorder) {
        const Vertex& vx = h.vertex(x);
        vs.push_back({{"id", n.v.at(x)}, {"type", vx.type.to_string()}, {"parent", vx.parent == kOutermost ? 0u : n.e.at(vx.parent)}});
    }
    json es = json::array();
    for (auto id : n.eorder) {
        const Edge& ed = h.edge(id);
        json je{{"id", n.e.at(id)},
                {"label", ed.label.to_string()},
                {"source", ids(ed.sources, n)},
                {"target", ids(ed.targets, n)},
                {"parent", ed.parent == kOutermost ? 0u : n.e.at(ed.parent)}};
        if (ed.label.kind == EdgeKind::Box)
            je["inner"] = {{"inputs", ids(ed.inner_inputs, n)}, {"outputs", ids(ed.inner_outputs, n)}};
        es.push_back(std::move(je));
    }
    doc["vertices"] = std::move(vs);
    doc["edges"] = std::move(es);
    doc["inputs"] = ids(h.inputs(), n);
    doc["outputs"] = ids(h.outputs(), n);
    return doc;
}

std::string to_json_string(const Hypernet& h, int indent) { return to_json(h).dump(indent); }

Hypernet from_json(const json& doc) {
    if (!doc.is_object()) throw SerializationError("document must be a JSON object");
    int version = field<int>(doc, "version", "document");
    if (version != kFormatVersion)
        throw SerializationError("unsupported format version " + std::to_string(version));
    const json& jv = doc.contains("vertices") ? doc.at("vertices") : throw SerializationError("document: missing field 'vertices'");
    const json& je = doc.contains("edges") ? doc.at("edges") : throw SerializationError("document: missing field 'edges'");
    if (!jv.is_array() || !je.is_array()) throw SerializationError("vertices and edges must be arrays");

    struct RawVertex {
        Type type;
        std::uint32_t parent;
    };
    struct RawEdge {
        Label label;
        std::vector<std::uint32_t> sources, targets, inner_in, inner_out;
        std::uint32_t parent;
    };
    std::map<std::uint32_t, RawVertex> rv;
    std::map<std::uint32_t, RawEdge> re;
    for (const auto& x : jv) {
        auto id = field<std::uint32_t>(x, "id", "vertex");
        std::string where = "vertex " + std::to_string(id);
        Type t;
        try {
            t = parse_type(field<std::string>(x, "type", where));
        } catch (const TypeSyntaxError& err) {
            throw SerializationError(where + ": " + err.what());
        }
        std::uint32_t parent = x.contains("parent") ? field<std::uint32_t>(x, "parent", where) : 0;
        if (!rv.emplace(id, RawVertex{t, parent}).second) throw SerializationError("duplicate " + where);
    }
    for (const auto& x : je) {
        auto id = field<std::uint32_t>(x, "id", "edge");
        std::string where = "edge " + std::to_string(id);
        RawEdge r;
        try {
            r.label = parse_label(field<std::string>(x, "label", where));
        } catch (const std::exception& err) {
            throw SerializationError(where + ": " + err.what());
        }
        r.sources = field<std::vector<std::uint32_t>>(x, "source", where);
        r.targets = field<std::vector<std::uint32_t>>(x, "target", where);
        r.parent = x.contains("parent") ? field<std::uint32_t>(x, "parent", where) : 0;
        if (x.contains("inner")) {
            r.inner_in = field<std::vector<std::uint32_t>>(x.at("inner"), "inputs", where + " inner");
            r.inner_out = field<std::vector<std::uint32_t>>(x.at("inner"), "outputs", where + " inner");
        }
        if (r.label.kind == EdgeKind::Box && !x.contains("inner"))
            throw SerializationError(where + ": box without inner interface");
        if (!re.emplace(id, std::move(r)).second) throw SerializationError("duplicate " + where);
    }
    auto inputs = field<std::vector<std::uint32_t>>(doc, "inputs", "document");
    auto outputs = field<std::vector<std::uint32_t>>(doc, "outputs", "document");

    for (const auto& [id, v] : rv)
        if (v.parent != 0 && (!re.count(v.parent) || re.at(v.parent).label.kind != EdgeKind::Box))
            throw SerializationError("vertex " + std::to_string(id) + " has unknown parent box " + std::to_string(v.parent));
    for (const auto& [id, e] : re)
        if (e.parent != 0 && (!re.count(e.parent) || re.at(e.parent).label.kind != EdgeKind::Box))
            throw SerializationError("edge " + std::to_string(id) + " has unknown parent box " + std::to_string(e.parent));

    Hypernet h;
    std::map<std::uint32_t, VertexId> vmap;
    std::map<std::uint32_t, EdgeId> emap{{0u, kOutermost}};
    auto vref = [&](std::uint32_t raw, const std::string& where) {
        auto it = vmap.find(raw);
        if (it == vmap.end())
            throw SerializationError(where + " refers to unknown or out-of-level vertex " + std::to_string(raw));
        return it->second;
    };
    auto refs = [&](const std::vector<std::uint32_t>& raws, const std::string& where) {
        std::vector<VertexId> out;
        for (auto r : raws) out.push_back(vref(r, where));
        return out;
    };
    std::deque<std::uint32_t> levels{0};
    std::size_t built_edges = 0;
    while (!levels.empty()) {
        std::uint32_t lvl = levels.front();
        levels.pop_front();
        EdgeId mapped = emap.at(lvl);
        for (const auto& [id, v] : rv)
            if (v.parent == lvl) vmap[id] = h.add_vertex(v.type, mapped);
        for (const auto& [id, e] : re) {
            if (e.parent != lvl) continue;
            std::string where = "edge " + std::to_string(id);
            Edge ne;
            ne.label = e.label;
            ne.sources = refs(e.sources, where);
            ne.targets = refs(e.targets, where);
            ne.parent = mapped;
            emap[id] = h.add_edge(std::move(ne));
            ++built_edges;
            if (e.label.kind == EdgeKind::Box) levels.push_back(id);
        }
        if (lvl != 0) {
            const RawEdge& box = re.at(lvl);
            std::string where = "box " + std::to_string(lvl);
            auto ins = refs(box.inner_in, where + " inner inputs");
            auto outs = refs(box.inner_out, where + " inner outputs");
            h.edge_mut(mapped).inner_inputs = ins;
            h.edge_mut(mapped).inner_outputs = outs;
        }
    }
    if (built_edges != re.size()) throw SerializationError("edge parents form a cycle");
    h.inputs_mut() = refs(inputs, "inputs");
    h.outputs_mut() = refs(outputs, "outputs");
    return h;
}

Hypernet from_json_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw SerializationError(std::string("malformed JSON: ") + err.what());
    }
    return from_json(doc);
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

void dot_level(const Hypernet& h, EdgeId lvl, const std::string& indent, std::ostringstream& os) {
    std::string tag = "l" + std::to_string(lvl);
    const auto& ins = h.inputs(lvl);
    const auto& outs = h.outputs(lvl);
    for (std::size_t i = 0; i < ins.size(); ++i)
        os << indent << tag << "_in" << i << " [shape=plaintext,label=\"in" << i << "\"];\n";
    for (std::size_t i = 0; i < outs.size(); ++i)
        os << indent << tag << "_out" << i << " [shape=plaintext,label=\"out" << i << "\"];\n";
    for (auto v : h.vertices_at(lvl))
        os << indent << "v" << v << " [shape=point,xlabel=\"" << dot_escape(h.vertex(v).type.to_string()) << "\"];\n";
    for (std::size_t i = 0; i < ins.size(); ++i) os << indent << tag << "_in" << i << " -> v" << ins[i] << ";\n";
    for (std::size_t i = 0; i < outs.size(); ++i) os << indent << "v" << outs[i] << " -> " << tag << "_out" << i << ";\n";
    for (EdgeId e : h.edges_at(lvl)) {
        const Edge& ed = h.edge(e);
        if (ed.label.kind == EdgeKind::Box) {
            os << indent << "subgraph cluster_e" << e << " {\n" << indent << "  label=\"box e" << e << "\";\n";
            dot_level(h, e, indent + "  ", os);
            os << indent << "}\n";
            os << indent << "e" << e << " [shape=box,style=rounded,label=\"box\"];\n";
        } else {
            os << indent << "e" << e << " [shape=box,label=\"" << dot_escape(ed.label.to_string()) << "\"];\n";
        }
        for (std::size_t i = 0; i < ed.sources.size(); ++i)
            os << indent << "v" << ed.sources[i] << " -> e" << e << " [headlabel=\"" << i << "\"];\n";
        for (std::size_t i = 0; i < ed.targets.size(); ++i)
            os << indent << "e" << e << " -> v" << ed.targets[i] << " [taillabel=\"" << i << "\"];\n";
    }
}

std::string list(const std::vector<VertexId>& vs) {
    std::string s = "[";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", v" : "v") + std::to_string(vs[i]);
    return s + "]";
}

void text_level(const Hypernet& h, EdgeId lvl, const std::string& indent, std::ostringstream& os) {
    for (EdgeId e : canonical_order(h, lvl)) {
        const Edge& ed = h.edge(e);
        os << indent << "e" << e << " " << ed.label.to_string() << " " << list(ed.sources) << " -> " << list(ed.targets)
           << "\n";
        if (ed.label.kind == EdgeKind::Box) {
            os << indent << "  inner " << list(ed.inner_inputs) << " => " << list(ed.inner_outputs) << "\n";
            text_level(h, e, indent + "    ", os);
        }
    }
}

}  // namespace

std::string to_dot(const Hypernet& h) {
    std::ostringstream os;
    os << "digraph hypernet {\n  rankdir=LR;\n";
    dot_level(h, kOutermost, "  ", os);
    os << "}\n";
    return os.str();
}

std::string to_text(const Hypernet& h) {
    std::ostringstream os;
    os << "inputs " << list(h.inputs()) << " : " << to_string(h.input_types()) << "\n";
    text_level(h, kOutermost, "  ", os);
    os << "outputs " << list(h.outputs()) << " : " << to_string(h.output_types()) << "\n";
    return os.str();
}

}  // namespace hyperad
