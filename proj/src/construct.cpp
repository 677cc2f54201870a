#include "hyperad/construct.hpp"

namespace hyperad {

Hypernet build_atomic(const Label& label, const TypeList& operands_in, const TypeList& results_in) {
    const TypeList operands = flatten(operands_in);
    const TypeList results = flatten(results_in);
    auto fail = [&](const std::string& what) {
        throw ConstructionError("build_atomic(" + label.to_string() + ", " + to_string(operands) + ", " +
                                to_string(results) + "): " + what);
    };
    switch (label.kind) {
        case EdgeKind::Op:
            if (auto err = Signature::builtin().check(label, operands, results)) fail(*err);
            break;
        case EdgeKind::Eval: {
            if (operands.empty() || !operands[0].is_arrow()) fail("operand 0 must be a function");
            const Type& fn = operands[0];
            TypeList args(operands.begin() + 1, operands.end());
            if (args != fn.operands())
                fail("arguments " + to_string(args) + " do not match " + to_string(fn.operands()));
            if (results != fn.results()) fail("results do not match " + to_string(fn.results()));
            break;
        }
        case EdgeKind::Copy:
            if (operands.size() != 1) fail("copy takes exactly one operand");
            if (results.size() != 2 || results[0] != operands[0] || results[1] != operands[0])
                fail("copy produces two results of the operand type");
            break;
        case EdgeKind::Discard:
            if (operands.size() != 1) fail("discard takes exactly one operand");
            if (!results.empty()) fail("discard has no results");
            break;
        case EdgeKind::Box: fail("boxes are built with abstraction()");
    }
    Hypernet net;
    NetBuilder b(net);
    auto ins = b.inputs(operands);
    auto outs = b.op(label, ins, results);
    b.outputs(outs);
    return net;
}

Hypernet build_atomic(const std::string& op_name, const TypeList& operands, const TypeList& results) {
    return build_atomic(Label::op(op_name), operands, results);
}

Hypernet identity_net(const TypeList& types) {
    Hypernet net;
    NetBuilder b(net);
    auto ins = b.inputs(flatten(types));
    b.outputs(ins);
    return net;
}

Hypernet swap_net(const TypeList& types_in, std::size_t position) {
    const TypeList types = flatten(types_in);
    if (types.size() < 2 || position >= types.size() - 1)
        throw ConstructionError("swap position " + std::to_string(position) + " out of range for " +
                                to_string(types));
    Hypernet net;
    NetBuilder b(net);
    auto ins = b.inputs(types);
    auto outs = ins;
    std::swap(outs[position], outs[position + 1]);
    b.outputs(outs);
    return net;
}

Hypernet compose_seq(const Hypernet& f, const Hypernet& g) {
    const TypeList fo = f.output_types();
    const TypeList gi = g.input_types();
    if (fo != gi) throw CompositionError("cannot compose: outputs " + to_string(fo) + " vs inputs " + to_string(gi));
    Hypernet net;
    NetBuilder b(net);
    auto ins = b.inputs(f.input_types());
    auto mid = b.embed(f, ins);
    auto outs = b.embed(g, mid);
    b.outputs(outs);
    return net;
}

Hypernet compose_par(const Hypernet& f, const Hypernet& g) {
    Hypernet net;
    NetBuilder b(net);
    auto fi = b.inputs(f.input_types());
    auto gi = b.inputs(g.input_types());
    auto fo = b.embed(f, fi);
    auto go = b.embed(g, gi);
    b.outputs(fo);
    b.outputs(go);
    return net;
}

Hypernet abstraction(const Hypernet& body, std::size_t bound_count) {
    const TypeList in = body.input_types();
    if (bound_count > in.size())
        throw ConstructionError("abstraction binds " + std::to_string(bound_count) + " of " +
                                std::to_string(in.size()) + " inputs");
    if (body.empty()) throw ConstructionError("abstraction of an empty body");
    const std::size_t captured = in.size() - bound_count;
    TypeList bound(in.begin() + static_cast<std::ptrdiff_t>(captured), in.end());
    Hypernet net;
    NetBuilder b(net);
    auto ctx = b.inputs(TypeList(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(captured)));
    VertexId fn = b.box(ctx, bound, [&](NetBuilder& inner, std::span<const VertexId> wires) {
        return inner.embed(body, wires);
    });
    b.output(fn);
    return net;
}

}  // namespace hyperad
