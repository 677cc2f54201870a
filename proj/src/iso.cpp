#include "hyperad/iso.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace hyperad {

namespace {

struct Shared {
    const Hypernet& p;
    const Hypernet& h;
    NetIndex pi;
    NetIndex hi;
    std::vector<EdgeId> host_edges_by_depth;
    std::map<std::pair<EdgeId, EdgeId>, std::optional<Embedding>> inner_cache;

    Shared(const Hypernet& pattern, const Hypernet& host) : p(pattern), h(host), pi(pattern), hi(host) {
        for (const auto& [id, e] : host.edges()) host_edges_by_depth.push_back(id);
        std::stable_sort(host_edges_by_depth.begin(), host_edges_by_depth.end(), [&](EdgeId a, EdgeId b) {
            return host.depth_of_edge(a) < host.depth_of_edge(b);
        });
    }
};

bool same_label(const Label& a, const Label& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == EdgeKind::Box) return true;
    return a == b;
}

std::optional<Embedding> match_inner(Shared& sh, EdgeId pe, EdgeId he);

class Search {
public:
    Search(Shared& sh, EdgeId plevel, std::optional<EdgeId> hlevel, bool exact)
        : sh_(sh), plevel_(plevel), hlevel_(hlevel), exact_(exact) {
        pedges_ = sh.pi.edges_at(plevel);
        pverts_ = sh.pi.vertices_at(plevel);
    }

    std::function<bool(const Search&)> final_check;
    std::function<bool(const Embedding&)> visit;
    EdgeId default_level = kOutermost;

    bool seed(VertexId pv, VertexId hv) { return assign_vertex(pv, hv); }

    void run() { step(); }

    std::optional<VertexId> image(VertexId pv) const {
        auto it = vmap_.find(pv);
        if (it == vmap_.end()) return std::nullopt;
        return it->second;
    }

private:
    struct Entry {
        enum Kind { V, E, Level } kind;
        std::uint32_t id;
    };

    Shared& sh_;
    EdgeId plevel_;
    std::optional<EdgeId> hlevel_;
    bool exact_;
    bool stop_ = false;
    std::vector<EdgeId> pedges_;
    std::vector<VertexId> pverts_;
    std::unordered_map<VertexId, VertexId> vmap_;
    std::unordered_set<VertexId> vused_;
    std::unordered_map<EdgeId, EdgeId> emap_;
    std::unordered_set<EdgeId> eused_;
    std::unordered_map<EdgeId, Embedding> inner_;
    std::vector<Entry> trail_;

    EdgeId host_level() const { return hlevel_ ? *hlevel_ : default_level; }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            Entry en = trail_.back();
            trail_.pop_back();
            if (en.kind == Entry::V) {
                vused_.erase(vmap_.at(en.id));
                vmap_.erase(en.id);
            } else if (en.kind == Entry::E) {
                eused_.erase(emap_.at(en.id));
                emap_.erase(en.id);
            } else {
                hlevel_.reset();
            }
        }
    }

    bool assign_vertex(VertexId pv, VertexId hv) {
        if (auto it = vmap_.find(pv); it != vmap_.end()) return it->second == hv;
        if (vused_.count(hv)) return false;
        const Vertex& a = sh_.p.vertex(pv);
        const Vertex& b = sh_.h.vertex(hv);
        if (a.type != b.type || b.parent != host_level()) return false;
        vmap_[pv] = hv;
        vused_.insert(hv);
        trail_.push_back({Entry::V, pv});
        return true;
    }

    bool assign_edge(EdgeId pe, EdgeId he) {
        if (eused_.count(he)) return false;
        const Edge& a = sh_.p.edge(pe);
        const Edge& b = sh_.h.edge(he);
        if (!same_label(a.label, b.label) || a.sources.size() != b.sources.size() ||
            a.targets.size() != b.targets.size())
            return false;
        if (!hlevel_) {
            hlevel_ = b.parent;
            trail_.push_back({Entry::Level, 0});
        } else if (b.parent != *hlevel_) {
            return false;
        }
        for (std::size_t i = 0; i < a.sources.size(); ++i)
            if (!assign_vertex(a.sources[i], b.sources[i])) return false;
        for (std::size_t i = 0; i < a.targets.size(); ++i)
            if (!assign_vertex(a.targets[i], b.targets[i])) return false;
        if (a.label.kind == EdgeKind::Box) {
            auto inner = match_inner(sh_, pe, he);
            if (!inner) return false;
            inner_[pe] = *inner;
        }
        emap_[pe] = he;
        eused_.insert(he);
        trail_.push_back({Entry::E, pe});
        return true;
    }

    /// Host edge forced by an already mapped incident vertex; 0 when none,
    /// nullopt when the pattern edge cannot be placed at all.
    std::optional<EdgeId> forced(EdgeId pe) const {
        const Edge& a = sh_.p.edge(pe);
        for (std::size_t i = 0; i < a.sources.size(); ++i) {
            auto it = vmap_.find(a.sources[i]);
            if (it == vmap_.end()) continue;
            auto c = sh_.hi.consumer(it->second);
            if (!c || c->position != i) return std::nullopt;
            return c->edge;
        }
        for (std::size_t i = 0; i < a.targets.size(); ++i) {
            auto it = vmap_.find(a.targets[i]);
            if (it == vmap_.end()) continue;
            auto pr = sh_.hi.producer(it->second);
            if (!pr || pr->position != i) return std::nullopt;
            return pr->edge;
        }
        return EdgeId{0};
    }

    void step() {
        if (stop_) return;
        EdgeId pick = 0;
        EdgeId forced_host = 0;
        for (EdgeId pe : pedges_) {
            if (emap_.count(pe)) continue;
            auto f = forced(pe);
            if (!f) return;
            if (*f != 0) {
                pick = pe;
                forced_host = *f;
                break;
            }
            if (pick == 0) pick = pe;
        }
        if (pick == 0) {
            assign_isolated();
            return;
        }
        auto attempt = [&](EdgeId he) {
            std::size_t mark = trail_.size();
            if (assign_edge(pick, he)) step();
            undo(mark);
        };
        if (forced_host != 0) {
            attempt(forced_host);
            return;
        }
        const std::vector<EdgeId>& cands = hlevel_ ? sh_.hi.edges_at(*hlevel_) : sh_.host_edges_by_depth;
        for (EdgeId he : cands) {
            if (stop_) return;
            attempt(he);
        }
    }

    void assign_isolated() {
        VertexId pv = 0;
        for (VertexId v : pverts_)
            if (!vmap_.count(v)) {
                pv = v;
                break;
            }
        if (pv == 0) {
            finish();
            return;
        }
        for (VertexId hv : sh_.hi.vertices_at(host_level())) {
            if (stop_) return;
            std::size_t mark = trail_.size();
            if (assign_vertex(pv, hv)) assign_isolated();
            undo(mark);
        }
    }

    void finish() {
        const EdgeId hl = host_level();
        if (exact_) {
            if (sh_.hi.edges_at(hl).size() != pedges_.size()) return;
            if (sh_.hi.vertices_at(hl).size() != pverts_.size()) return;
        } else {
            std::unordered_set<VertexId> iface(sh_.p.inputs(plevel_).begin(), sh_.p.inputs(plevel_).end());
            iface.insert(sh_.p.outputs(plevel_).begin(), sh_.p.outputs(plevel_).end());
            std::unordered_set<VertexId> hiface(sh_.h.inputs(hl).begin(), sh_.h.inputs(hl).end());
            hiface.insert(sh_.h.outputs(hl).begin(), sh_.h.outputs(hl).end());
            for (VertexId pv : pverts_) {
                if (iface.count(pv)) continue;
                VertexId hv = vmap_.at(pv);
                if (hiface.count(hv)) return;
                auto pr = sh_.hi.producer(hv);
                auto co = sh_.hi.consumer(hv);
                if (pr && !eused_.count(pr->edge)) return;
                if (co && !eused_.count(co->edge)) return;
            }
        }
        if (final_check && !final_check(*this)) return;
        Embedding out;
        out.level = hl;
        for (const auto& [pv, hv] : vmap_) out.vertices[pv] = hv;
        for (const auto& [pe, he] : emap_) {
            out.edges[pe] = he;
            if (auto it = inner_.find(pe); it != inner_.end()) {
                out.vertices.insert(it->second.vertices.begin(), it->second.vertices.end());
                out.edges.insert(it->second.edges.begin(), it->second.edges.end());
            }
        }
        if (!visit(out)) stop_ = true;
    }
};

std::optional<Embedding> match_inner(Shared& sh, EdgeId pe, EdgeId he) {
    auto key = std::make_pair(pe, he);
    if (auto it = sh.inner_cache.find(key); it != sh.inner_cache.end()) return it->second;
    std::optional<Embedding> result;
    const Edge& a = sh.p.edge(pe);
    const Edge& b = sh.h.edge(he);
    if (a.inner_inputs.size() == b.inner_inputs.size() && a.inner_outputs.size() == b.inner_outputs.size()) {
        Search s(sh, pe, he, true);
        bool ok = true;
        for (std::size_t i = 0; ok && i < a.inner_inputs.size(); ++i) ok = s.seed(a.inner_inputs[i], b.inner_inputs[i]);
        for (std::size_t i = 0; ok && i < a.inner_outputs.size(); ++i)
            ok = s.seed(a.inner_outputs[i], b.inner_outputs[i]);
        if (ok) {
            s.visit = [&](const Embedding& e) {
                result = e;
                return false;
            };
            s.run();
        }
    }
    sh.inner_cache[key] = result;
    return result;
}

bool is_free(const std::vector<bool>& mask, std::size_t i) { return !mask.empty() && mask[i]; }

}  // namespace

void enumerate_embeddings(const Hypernet& pattern, const Hypernet& host, const MatchOptions& options,
                          const std::function<bool(const Embedding&)>& visit) {
    Shared sh(pattern, host);
    Search s(sh, kOutermost, options.level, false);
    if (options.level) s.default_level = *options.level;
    std::size_t count = 0;
    s.visit = [&](const Embedding& e) {
        ++count;
        if (!visit(e)) return false;
        return options.limit == 0 || count < options.limit;
    };
    s.run();
}

std::vector<Embedding> find_embeddings(const Hypernet& pattern, const Hypernet& host, const MatchOptions& options) {
    std::vector<Embedding> out;
    enumerate_embeddings(pattern, host, options, [&](const Embedding& e) {
        out.push_back(e);
        return true;
    });
    return out;
}

std::optional<Embedding> find_isomorphism(const Hypernet& a, const Hypernet& b, const IsoOptions& options) {
    const auto& ai = a.inputs();
    const auto& ao = a.outputs();
    const auto& bi = b.inputs();
    const auto& bo = b.outputs();
    if (ai.size() != bi.size() || ao.size() != bo.size()) return std::nullopt;
    if (a.vertices().size() != b.vertices().size() || a.edges().size() != b.edges().size()) return std::nullopt;
    if ((!options.free_inputs.empty() && options.free_inputs.size() != ai.size()) ||
        (!options.free_outputs.empty() && options.free_outputs.size() != ao.size()))
        throw Error("find_isomorphism: free mask size mismatch");
    {
        std::multiset<std::string> la, lb;
        for (const auto& [id, e] : a.edges()) la.insert(e.label.to_string());
        for (const auto& [id, e] : b.edges()) lb.insert(e.label.to_string());
        if (la != lb) return std::nullopt;
    }

    Shared sh(a, b);
    Search s(sh, kOutermost, kOutermost, true);
    for (std::size_t i = 0; i < ai.size(); ++i)
        if (!is_free(options.free_inputs, i) && !s.seed(ai[i], bi[i])) return std::nullopt;
    for (std::size_t i = 0; i < ao.size(); ++i)
        if (!is_free(options.free_outputs, i) && !s.seed(ao[i], bo[i])) return std::nullopt;

    std::set<VertexId> free_bi, free_bo;
    for (std::size_t i = 0; i < bi.size(); ++i)
        if (is_free(options.free_inputs, i)) free_bi.insert(bi[i]);
    for (std::size_t i = 0; i < bo.size(); ++i)
        if (is_free(options.free_outputs, i)) free_bo.insert(bo[i]);
    s.final_check = [&](const Search& st) {
        for (std::size_t i = 0; i < ai.size(); ++i)
            if (is_free(options.free_inputs, i) && !free_bi.count(*st.image(ai[i]))) return false;
        for (std::size_t i = 0; i < ao.size(); ++i)
            if (is_free(options.free_outputs, i) && !free_bo.count(*st.image(ao[i]))) return false;
        return true;
    };
    std::optional<Embedding> result;
    s.visit = [&](const Embedding& e) {
        result = e;
        return false;
    };
    s.run();
    return result;
}

bool isomorphic(const Hypernet& a, const Hypernet& b, const IsoOptions& options) {
    return find_isomorphism(a, b, options).has_value();
}

std::vector<bool> free_suffix(std::size_t size, std::size_t n) {
    std::vector<bool> m(size, false);
    for (std::size_t i = size - std::min(n, size); i < size; ++i) m[i] = true;
    return m;
}

std::vector<bool> free_prefix(std::size_t size, std::size_t n) {
    std::vector<bool> m(size, false);
    for (std::size_t i = 0; i < std::min(n, size); ++i) m[i] = true;
    return m;
}

}  // namespace hyperad
