#include "hyperad/string_term.hpp"

#include "hyperad/construct.hpp"

namespace hyperad {

namespace {

TypeList concat(TypeList a, const TypeList& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

TermPtr make(StringTerm t) { return std::make_shared<const StringTerm>(std::move(t)); }

}  // namespace

TermPtr StringTerm::atom(Label label, TypeList operands, TypeList results) {
    StringTerm t;
    t.kind = Kind::Atom;
    t.label = std::move(label);
    t.operands = flatten(operands);
    t.results = flatten(results);
    return make(std::move(t));
}

TermPtr StringTerm::id(TypeList types) {
    StringTerm t;
    t.kind = Kind::Id;
    t.operands = flatten(types);
    return make(std::move(t));
}

TermPtr StringTerm::swap(TypeList a, TypeList b) {
    StringTerm t;
    t.kind = Kind::Swap;
    t.operands = flatten(a);
    t.results = flatten(b);
    return make(std::move(t));
}

TermPtr StringTerm::seq(TermPtr f, TermPtr g) {
    StringTerm t;
    t.kind = Kind::Seq;
    t.left = std::move(f);
    t.right = std::move(g);
    return make(std::move(t));
}

TermPtr StringTerm::par(TermPtr f, TermPtr g) {
    StringTerm t;
    t.kind = Kind::Par;
    t.left = std::move(f);
    t.right = std::move(g);
    return make(std::move(t));
}

TermPtr StringTerm::abs(TermPtr body, std::size_t bound) {
    StringTerm t;
    t.kind = Kind::Abs;
    t.left = std::move(body);
    t.bound = bound;
    return make(std::move(t));
}

TypeList StringTerm::dom() const {
    switch (kind) {
        case Kind::Atom:
        case Kind::Id: return operands;
        case Kind::Swap: return concat(operands, results);
        case Kind::Seq: return left->dom();
        case Kind::Par: return concat(left->dom(), right->dom());
        case Kind::Abs: {
            TypeList in = left->dom();
            if (bound > in.size()) return in;
            return TypeList(in.begin(), in.end() - static_cast<std::ptrdiff_t>(bound));
        }
    }
    return {};
}

TypeList StringTerm::cod() const {
    switch (kind) {
        case Kind::Atom: return results;
        case Kind::Id: return operands;
        case Kind::Swap: return concat(results, operands);
        case Kind::Seq: return right->cod();
        case Kind::Par: return concat(left->cod(), right->cod());
        case Kind::Abs: {
            TypeList in = left->dom();
            std::size_t k = std::min(bound, in.size());
            return {Type::arrow(TypeList(in.end() - static_cast<std::ptrdiff_t>(k), in.end()), left->cod())};
        }
    }
    return {};
}

bool operator==(const StringTerm& a, const StringTerm& b) {
    if (a.kind != b.kind || a.bound != b.bound) return false;
    if (!(a.label == b.label) || a.operands != b.operands || a.results != b.results) return false;
    auto same = [](const TermPtr& x, const TermPtr& y) {
        if (!x || !y) return !x && !y;
        return *x == *y;
    };
    return same(a.left, b.left) && same(a.right, b.right);
}

std::string to_string(const StringTerm& t) {
    switch (t.kind) {
        case StringTerm::Kind::Atom: return t.label.to_string() + ":" + to_string(t.operands) + "->" + to_string(t.results);
        case StringTerm::Kind::Id: return "id" + to_string(t.operands);
        case StringTerm::Kind::Swap: return "swap" + to_string(t.operands) + to_string(t.results);
        case StringTerm::Kind::Seq: return "(" + to_string(*t.left) + " ; " + to_string(*t.right) + ")";
        case StringTerm::Kind::Par: return "(" + to_string(*t.left) + " * " + to_string(*t.right) + ")";
        case StringTerm::Kind::Abs: return "lam" + std::to_string(t.bound) + "(" + to_string(*t.left) + ")";
    }
    return "?";
}

Hypernet interpret(const StringTerm& t) {
    switch (t.kind) {
        case StringTerm::Kind::Atom: return build_atomic(t.label, t.operands, t.results);
        case StringTerm::Kind::Id: return identity_net(t.operands);
        case StringTerm::Kind::Swap: {
            Hypernet net;
            NetBuilder b(net);
            auto a = b.inputs(t.operands);
            auto c = b.inputs(t.results);
            b.outputs(c);
            b.outputs(a);
            return net;
        }
        case StringTerm::Kind::Seq: return compose_seq(interpret(*t.left), interpret(*t.right));
        case StringTerm::Kind::Par: return compose_par(interpret(*t.left), interpret(*t.right));
        case StringTerm::Kind::Abs: return abstraction(interpret(*t.left), t.bound);
    }
    throw Error("interpret: unknown term kind");
}

TermPtr readback(const Foliation& f) {
    TermPtr term = StringTerm::id(f.inputs);
    for (const auto& leaf : f.leaves) {
        auto p = static_cast<std::ptrdiff_t>(leaf.position);
        TypeList left(leaf.wires.begin(), leaf.wires.begin() + p);
        TermPtr core;
        std::size_t width;
        if (leaf.kind == Leaf::Kind::Swap) {
            core = StringTerm::swap({leaf.wires[leaf.position]}, {leaf.wires[leaf.position + 1]});
            width = 2;
        } else if (leaf.label.kind == EdgeKind::Box) {
            core = StringTerm::abs(readback(*leaf.body), leaf.bound);
            width = leaf.operands.size();
        } else {
            core = StringTerm::atom(leaf.label, leaf.operands, leaf.results);
            width = leaf.operands.size();
        }
        TypeList right(leaf.wires.begin() + p + static_cast<std::ptrdiff_t>(width), leaf.wires.end());
        term = StringTerm::seq(term, StringTerm::par(StringTerm::par(StringTerm::id(left), core), StringTerm::id(right)));
    }
    return term;
}

TermPtr readback(const Hypernet& h) { return readback(foliate(h)); }

}  // namespace hyperad
