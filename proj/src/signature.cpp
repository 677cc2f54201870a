#include "hyperad/signature.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace hyperad {

std::string format_real(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string Label::to_string() const {
    switch (kind) {
        case EdgeKind::Op: return is_constant() ? "const:" + format_real(value) : name;
        case EdgeKind::Eval: return "eval";
        case EdgeKind::Copy: return "copy";
        case EdgeKind::Discard: return "discard";
        case EdgeKind::Box: return "box";
    }
    return "?";
}

Label parse_label(const std::string& text) {
    if (text == "eval") return Label::eval();
    if (text == "copy") return Label::copy();
    if (text == "discard") return Label::discard();
    if (text == "box") return Label::box();
    if (text.rfind("const:", 0) == 0) {
        double v = 0;
        const char* first = text.data() + 6;
        auto res = std::from_chars(first, text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            throw std::invalid_argument("bad constant label '" + text + "'");
        return Label::constant(v);
    }
    if (text.empty()) throw std::invalid_argument("empty label");
    return Label::op(text);
}

Value add_values(const Value& a, const Value& b) {
    if (a.is_real() && b.is_real()) return Value(a.real() + b.real());
    if (a.is_real() || b.is_real()) throw std::logic_error("adding a real to a bundle");
    const auto& x = a.bundle();
    const auto& y = b.bundle();
    if (x.empty()) return b;
    if (y.empty()) return a;
    if (x.size() != y.size()) throw std::logic_error("adding bundles of different shapes");
    std::vector<Value> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(add_values(x[i], y[i]));
    return Value(std::move(out));
}

Value zero_of(const Type& t) {
    if (t.is_bundle()) return Value(std::vector<Value>{});
    return Value(0.0);
}

Signature::Signature() {
    const Type r = Type::real();
    const Type b = Type::bundle();
    entries_["const"] = {{}, {r}, false};
    entries_["add"] = {{r, r}, {r}, false};
    entries_["sub"] = {{r, r}, {r}, false};
    entries_["mul"] = {{r, r}, {r}, false};
    entries_["neg"] = {{r}, {r}, false};
    entries_["sin"] = {{r}, {r}, false};
    entries_["cos"] = {{r}, {r}, false};
    entries_["exp"] = {{r}, {r}, false};
    entries_["badd"] = {{b, b}, {b}, false};
    entries_["bzero"] = {{}, {b}, false};
    entries_["pack"] = {{}, {b}, true};
    entries_["unpack"] = {{b}, {}, true};
}

const Signature& Signature::builtin() {
    static const Signature sig;
    return sig;
}

const Signature::Entry* Signature::find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> Signature::check(const Label& label, const TypeList& sources,
                                            const TypeList& targets) const {
    const Entry* e = find(label.name);
    if (!e) return "unknown operation '" + label.name + "'";
    auto ground = [](const TypeList& ts) {
        for (const auto& t : ts)
            if (!t.is_real() && !t.is_bundle()) return false;
        return true;
    };
    if (label.name == "pack") {
        if (!ground(sources)) return "pack operands must be ground";
        if (targets != e->results) return "pack produces one Bundle, got " + to_string(targets);
        return std::nullopt;
    }
    if (label.name == "unpack") {
        if (sources != e->operands) return "unpack consumes one Bundle, got " + to_string(sources);
        if (!ground(targets)) return "unpack results must be ground";
        return std::nullopt;
    }
    if (sources.size() != e->operands.size())
        return label.name + " expects " + std::to_string(e->operands.size()) + " operand(s), got " +
               std::to_string(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i)
        if (sources[i] != e->operands[i])
            return label.name + " operand " + std::to_string(i) + " expects " +
                   e->operands[i].to_string() + ", got " + sources[i].to_string();
    if (targets.size() != e->results.size())
        return label.name + " expects " + std::to_string(e->results.size()) + " result(s), got " +
               std::to_string(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (targets[i] != e->results[i])
            return label.name + " result " + std::to_string(i) + " expects " +
                   e->results[i].to_string() + ", got " + targets[i].to_string();
    return std::nullopt;
}

std::optional<TypeList> Signature::results_of(const std::string& name) const {
    const Entry* e = find(name);
    if (!e || e->variadic) return std::nullopt;
    return e->results;
}

std::vector<Value> Signature::evaluate(const Label& label, std::span<const Value> in,
                                       const TypeList& target_types) const {
    const std::string& n = label.name;
    auto r = [&](std::size_t i) { return in[i].real(); };
    if (n == "const") return {Value(label.value)};
    if (n == "add") return {Value(r(0) + r(1))};
    if (n == "sub") return {Value(r(0) - r(1))};
    if (n == "mul") return {Value(r(0) * r(1))};
    if (n == "neg") return {Value(-r(0))};
    if (n == "sin") return {Value(std::sin(r(0)))};
    if (n == "cos") return {Value(std::cos(r(0)))};
    if (n == "exp") return {Value(std::exp(r(0)))};
    if (n == "badd") return {add_values(in[0], in[1])};
    if (n == "bzero") return {Value(std::vector<Value>{})};
    if (n == "pack") return {Value(std::vector<Value>(in.begin(), in.end()))};
    if (n == "unpack") {
        const auto& items = in[0].bundle();
        std::vector<Value> out;
        if (items.empty()) {
            for (const auto& t : target_types) out.push_back(zero_of(t));
            return out;
        }
        if (items.size() != target_types.size())
            throw std::logic_error("unpack arity mismatch: bundle of " + std::to_string(items.size()) +
                                   ", expected " + std::to_string(target_types.size()));
        return items;
    }
    throw std::invalid_argument("no evaluation rule for operation '" + n + "'");
}

}  // namespace hyperad
