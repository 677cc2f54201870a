#include "hyperad/validate.hpp"

#include <algorithm>
#include <set>

namespace hyperad {

namespace {

std::string vname(VertexId v) { return "v" + std::to_string(v); }
std::string ename(EdgeId e) { return "e" + std::to_string(e); }

}  // namespace

std::vector<Violation> validate(const Hypernet& h) {
    std::vector<Violation> out;
    auto report = [&](std::string clause, std::string detail) {
        out.push_back({std::move(clause), std::move(detail)});
    };

    std::map<VertexId, int> as_source, as_target;
    for (const auto& [id, e] : h.edges()) {
        if (e.parent != kOutermost && !h.has_edge(e.parent)) {
            report("dangling-reference", ename(id) + " has missing parent " + ename(e.parent));
            continue;
        }
        std::set<VertexId> seen_s, seen_t;
        for (auto v : e.sources) {
            if (!h.has_vertex(v)) {
                report("dangling-reference", ename(id) + " sources missing " + vname(v));
                continue;
            }
            if (!seen_s.insert(v).second)
                report("linearity(source)", vname(v) + " occurs twice in s(" + ename(id) + ")");
            else
                ++as_source[v];
            if (h.vertex(v).parent != e.parent)
                report("parent-consistency", ename(id) + " and its source " + vname(v) + " have different parents");
        }
        for (auto v : e.targets) {
            if (!h.has_vertex(v)) {
                report("dangling-reference", ename(id) + " targets missing " + vname(v));
                continue;
            }
            if (!seen_t.insert(v).second)
                report("linearity(target)", vname(v) + " occurs twice in t(" + ename(id) + ")");
            else
                ++as_target[v];
            if (h.vertex(v).parent != e.parent)
                report("parent-consistency", ename(id) + " and its target " + vname(v) + " have different parents");
        }
    }
    for (const auto& [v, n] : as_source)
        if (n > 1) report("linearity(source)", vname(v) + " is a source of " + std::to_string(n) + " edges");
    for (const auto& [v, n] : as_target)
        if (n > 1) report("linearity(target)", vname(v) + " is a target of " + std::to_string(n) + " edges");

    for (const auto& [id, v] : h.vertices())
        if (v.parent != kOutermost && !h.has_edge(v.parent))
            report("dangling-reference", vname(id) + " has missing parent " + ename(v.parent));

    // Parent chains must terminate.
    bool parents_ok = true;
    for (const auto& [id, e] : h.edges()) {
        EdgeId p = e.parent;
        std::size_t steps = 0;
        while (p != kOutermost && h.has_edge(p) && steps <= h.edges().size()) {
            p = h.edge(p).parent;
            ++steps;
        }
        if (steps > h.edges().size()) {
            report("parent-acyclicity", ename(id) + " lies on a parent cycle");
            parents_ok = false;
        }
    }

    // Box exclusivity: inner graphs exactly on Box edges.
    std::map<EdgeId, int> children;
    for (const auto& [id, e] : h.edges())
        if (e.parent != kOutermost) ++children[e.parent];
    for (const auto& [id, v] : h.vertices())
        if (v.parent != kOutermost) ++children[v.parent];
    for (const auto& [id, e] : h.edges()) {
        const bool is_box = e.label.kind == EdgeKind::Box;
        const bool has_inner = children.count(id) != 0;
        if (is_box && !has_inner) report("box-exclusivity", ename(id) + " is a box with an empty inner graph");
        if (!is_box && has_inner) report("box-exclusivity", ename(id) + " is labelled but has an inner graph");
        if (!is_box && (!e.inner_inputs.empty() || !e.inner_outputs.empty()))
            report("box-exclusivity", ename(id) + " is labelled but has inner interface orderings");
    }
    if (!parents_ok) return out;

    // Per-level acyclicity and interface coverage.
    std::vector<EdgeId> levels{kOutermost};
    for (const auto& [id, e] : h.edges())
        if (e.label.kind == EdgeKind::Box) levels.push_back(id);
    for (EdgeId level : levels) {
        auto vs = h.vertices_at(level);
        auto es = h.edges_at(level);
        std::set<VertexId> want_in, want_out;
        for (auto v : vs) {
            if (!as_target.count(v)) want_in.insert(v);
            if (!as_source.count(v)) want_out.insert(v);
        }
        auto check_list = [&](const std::vector<VertexId>& list, const std::set<VertexId>& want, const char* which) {
            std::set<VertexId> got;
            for (auto v : list) {
                if (!got.insert(v).second) report("interface-coverage", std::string(which) + " order repeats " + vname(v));
                if (!h.has_vertex(v) || h.vertex(v).parent != level)
                    report("interface-coverage", std::string(which) + " order of level " + ename(level) +
                                                     " lists foreign " + vname(v));
            }
            for (auto v : want)
                if (!got.count(v)) report("interface-coverage", vname(v) + " missing from " + which + " order of level " + ename(level));
            for (auto v : got)
                if (!want.count(v) && h.has_vertex(v))
                    report("interface-coverage", vname(v) + " is not an " + which + " vertex of level " + ename(level));
        };
        check_list(h.inputs(level), want_in, "input");
        check_list(h.outputs(level), want_out, "output");

        // Kahn's algorithm on edges of this level.
        std::map<VertexId, EdgeId> producer;
        for (auto e : es)
            for (auto v : h.edge(e).targets) producer[v] = e;
        std::map<EdgeId, int> indeg;
        std::map<EdgeId, std::vector<EdgeId>> succ;
        for (auto e : es) {
            indeg[e];
            for (auto v : h.edge(e).sources) {
                auto it = producer.find(v);
                if (it != producer.end()) {
                    ++indeg[e];
                    succ[it->second].push_back(e);
                }
            }
        }
        std::vector<EdgeId> ready;
        for (auto& [e, d] : indeg)
            if (d == 0) ready.push_back(e);
        std::size_t done = 0;
        while (!ready.empty()) {
            EdgeId e = ready.back();
            ready.pop_back();
            ++done;
            for (auto s : succ[e])
                if (--indeg[s] == 0) ready.push_back(s);
        }
        if (done != es.size()) report("level-acyclicity", "cycle among edges of level " + ename(level));
    }
    return out;
}

Typing well_typed(const Hypernet& h) {
    Typing t;
    t.operands = h.input_types();
    t.results = h.output_types();
    const auto& sig = Signature::builtin();
    for (const auto& [id, e] : h.edges()) {
        TypeList src = h.types_of(e.sources);
        TypeList tgt = h.types_of(e.targets);
        auto issue = [&](std::string expected, std::string actual, std::string msg) {
            t.errors.push_back({id, std::move(expected), std::move(actual), ename(id) + ": " + std::move(msg)});
        };
        switch (e.label.kind) {
            case EdgeKind::Op:
                if (auto err = sig.check(e.label, src, tgt)) issue("signature of " + e.label.name, to_string(src) + " -> " + to_string(tgt), *err);
                break;
            case EdgeKind::Eval: {
                if (src.empty() || !src[0].is_arrow()) {
                    issue("function operand", to_string(src), "eval needs a function as operand 0");
                    break;
                }
                TypeList args(src.begin() + 1, src.end());
                if (args != src[0].operands())
                    issue(to_string(src[0].operands()), to_string(args), "eval argument types");
                if (tgt != src[0].results()) issue(to_string(src[0].results()), to_string(tgt), "eval result types");
                break;
            }
            case EdgeKind::Copy:
                if (src.size() != 1 || tgt.size() != 2 || tgt[0] != src[0] || tgt[1] != src[0])
                    issue("[A] -> [A, A]", to_string(src) + " -> " + to_string(tgt), "copy typing");
                break;
            case EdgeKind::Discard:
                if (src.size() != 1 || !tgt.empty())
                    issue("[A] -> []", to_string(src) + " -> " + to_string(tgt), "discard typing");
                break;
            case EdgeKind::Box: {
                TypeList li = h.types_of(e.inner_inputs);
                TypeList lo = h.types_of(e.inner_outputs);
                if (src.size() > li.size() || !std::equal(src.begin(), src.end(), li.begin())) {
                    issue(to_string(li) + " prefix", to_string(src), "box sources must prefix the inner inputs");
                    break;
                }
                TypeList la(li.begin() + static_cast<std::ptrdiff_t>(src.size()), li.end());
                Type want = Type::arrow(la, lo);
                if (tgt.size() != 1 || tgt[0] != want)
                    issue("[" + want.to_string() + "]", to_string(tgt), "box target must be the arrow of its body");
                break;
            }
        }
    }
    return t;
}

void require_well_typed(const Hypernet& h, const std::string& context) {
    auto violations = validate(h);
    if (!violations.empty()) {
        std::string msg = context + ": invalid hypernet:";
        for (const auto& v : violations) msg += " [" + v.clause + "] " + v.detail + ";";
        throw TypeError(msg);
    }
    auto typing = well_typed(h);
    if (!typing.ok()) {
        std::string msg = context + ": ill-typed hypernet:";
        for (const auto& e : typing.errors) msg += " " + e.message + " (expected " + e.expected + ", got " + e.actual + ");";
        throw TypeError(msg);
    }
}

}  // namespace hyperad
