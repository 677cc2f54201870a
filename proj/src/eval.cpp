#include "hyperad/eval.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "hyperad/construct.hpp"
#include "hyperad/foliation.hpp"
#include "hyperad/lambda.hpp"
#include "hyperad/validate.hpp"

namespace hyperad {

namespace {

void require_real_interface(const Hypernet& h, const std::string& what) {
    for (const auto* ts : {&h.inputs(), &h.outputs()})
        for (auto v : *ts)
            if (!h.vertex(v).type.is_real())
                throw TypeError(what + " needs a first-order interface of reals, got " + to_string(h.input_types()) +
                                " -> " + to_string(h.output_types()));
}

}  // namespace

CompiledNet::CompiledNet(const Hypernet& h, std::size_t fuel) {
    require_well_typed(h, "evaluate");
    require_real_interface(h, "evaluation");
    NormalizeOptions opt;
    opt.fuel = fuel;
    opt.outermost_only = true;
    auto norm = normalize(h, evaluation_rules(), opt);
    net_ = std::move(norm.net);
    steps_ = norm.trace.size();
    arity_ = net_.inputs().size();
    coarity_ = net_.outputs().size();
    std::map<VertexId, std::size_t> slot;
    auto slot_of = [&](VertexId v) {
        auto [it, fresh] = slot.emplace(v, slot.size());
        (void)fresh;
        return it->second;
    };
    for (auto v : net_.inputs()) inputs_.push_back(slot_of(v));
    for (EdgeId e : canonical_order(net_)) {
        const Edge& ed = net_.edge(e);
        if (ed.label.kind == EdgeKind::Box || ed.label.kind == EdgeKind::Eval)
            throw EvalError("normalization left a " + ed.label.to_string() + " edge at the top level");
        Step s;
        s.label = ed.label;
        for (auto v : ed.sources) s.in.push_back(slot_of(v));
        for (auto v : ed.targets) s.out.push_back(slot_of(v));
        s.out_types = net_.types_of(ed.targets);
        schedule_.push_back(std::move(s));
    }
    for (auto v : net_.outputs()) outputs_.push_back(slot_of(v));
    slots_ = slot.size();
}

std::vector<double> CompiledNet::operator()(const std::vector<double>& x) const {
    if (x.size() != arity_)
        throw EvalError("expected " + std::to_string(arity_) + " inputs, got " + std::to_string(x.size()));
    std::vector<Value> val(slots_);
    for (std::size_t i = 0; i < x.size(); ++i) val[inputs_[i]] = Value(x[i]);
    const auto& sig = Signature::builtin();
    std::vector<Value> args;
    for (const auto& s : schedule_) {
        switch (s.label.kind) {
            case EdgeKind::Copy:
                val[s.out[0]] = val[s.in[0]];
                val[s.out[1]] = val[s.in[0]];
                break;
            case EdgeKind::Discard: break;
            case EdgeKind::Op: {
                args.clear();
                for (auto i : s.in) args.push_back(val[i]);
                auto r = sig.evaluate(s.label, args, s.out_types);
                for (std::size_t k = 0; k < s.out.size(); ++k) val[s.out[k]] = std::move(r[k]);
                break;
            }
            default: throw EvalError("unexpected edge in schedule");
        }
    }
    std::vector<double> out;
    for (auto i : outputs_) out.push_back(val[i].real());
    return out;
}

std::vector<double> eval_numeric(const Hypernet& h, const std::vector<double>& x, std::size_t fuel) {
    return CompiledNet(h, fuel)(x);
}

Hypernet gradient_net(const Hypernet& h, const PullbackRegistry& reg) {
    require_real_interface(h, "differentiation");
    Hypernet adj = adjoint(h, reg);
    const std::size_t m = h.outputs().size();
    Hypernet out;
    NetBuilder b(out);
    auto x = b.inputs(h.input_types());
    auto dy = b.inputs(cotangent_types(h.output_types()));
    auto outs = b.embed(adj, x);
    for (std::size_t i = 0; i < m; ++i) b.discard(outs[i]);
    b.outputs(b.eval(outs[m], dy));
    return out;
}

Differentiator::Differentiator(const Hypernet& h, const PullbackRegistry& reg, std::size_t fuel)
    : primal_(h, fuel), backward_(gradient_net(h, reg), fuel) {}

std::vector<double> Differentiator::vjp(const std::vector<double>& x, const std::vector<double>& dy) const {
    if (dy.size() != coarity())
        throw EvalError("expected " + std::to_string(coarity()) + " cotangents, got " + std::to_string(dy.size()));
    std::vector<double> in = x;
    in.insert(in.end(), dy.begin(), dy.end());
    return backward_(in);
}

std::vector<std::vector<double>> Differentiator::jacobian(const std::vector<double>& x) const {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < coarity(); ++i) {
        std::vector<double> e(coarity(), 0.0);
        e[i] = 1.0;
        rows.push_back(vjp(x, e));
    }
    return rows;
}

std::vector<double> gradient(const Hypernet& h, const std::vector<double>& x) {
    if (h.outputs().size() != 1)
        throw EvalError("gradient needs exactly one output, the net has " + std::to_string(h.outputs().size()) +
                        "; use jacobian instead");
    return Differentiator(h).jacobian(x)[0];
}

std::vector<std::vector<double>> jacobian(const Hypernet& h, const std::vector<double>& x) {
    return Differentiator(h).jacobian(x);
}

std::vector<std::vector<double>> finite_diff(const CompiledNet& f, const std::vector<double>& x) {
    std::vector<std::vector<double>> rows(f.coarity(), std::vector<double>(x.size(), 0.0));
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
        auto xp = x;
        auto xm = x;
        xp[j] += h;
        xm[j] -= h;
        auto fp = f(xp);
        auto fm = f(xm);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double d = (fp[i] - fm[i]) / (xp[j] - xm[j]);
            if (!std::isfinite(d))
                throw OracleError("finite difference of output " + std::to_string(i) + " in input " +
                                  std::to_string(j) + " is not finite");
            rows[i][j] = d;
        }
    }
    return rows;
}

bool GradReport::pass() const {
    for (const auto& p : points)
        if (!p.pass) return false;
    return !points.empty();
}

namespace {

std::string vec(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
    return s + "]";
}

}  // namespace

std::string GradReport::text() const {
    std::ostringstream os;
    if (!name.empty()) os << name << "\n";
    for (const auto& p : points) {
        os << "  x = " << vec(p.x) << (p.pass ? "  ok" : "  FAIL") << "  max abs err " << format_real(p.max_abs_error)
           << "  max rel err " << format_real(p.max_rel_error) << "\n";
        for (std::size_t i = 0; i < p.ad.size(); ++i)
            os << "    ad " << vec(p.ad[i]) << "  fd " << vec(p.fd[i]) << "\n";
    }
    os << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

nlohmann::json GradReport::json() const {
    nlohmann::json j;
    j["name"] = name;
    j["rel_tol"] = rel_tol;
    j["abs_floor"] = abs_floor;
    j["pass"] = pass();
    j["points"] = nlohmann::json::array();
    for (const auto& p : points)
        j["points"].push_back({{"x", p.x},
                               {"ad", p.ad},
                               {"fd", p.fd},
                               {"max_abs_error", p.max_abs_error},
                               {"max_rel_error", p.max_rel_error},
                               {"pass", p.pass}});
    return j;
}

GradReport compare_with_finite_differences(const Hypernet& h, const std::vector<std::vector<double>>& points,
                                           const std::string& name, double rel_tol, double abs_floor) {
    Differentiator d(h);
    GradReport rep;
    rep.name = name;
    rep.rel_tol = rel_tol;
    rep.abs_floor = abs_floor;
    for (const auto& x : points) {
        GradPoint p;
        p.x = x;
        p.ad = d.jacobian(x);
        p.fd = finite_diff(CompiledNet(h), x);
        for (std::size_t i = 0; i < p.ad.size(); ++i)
            for (std::size_t j = 0; j < p.ad[i].size(); ++j) {
                double a = p.ad[i][j], f = p.fd[i][j];
                double abs_err = std::abs(a - f);
                double scale = std::max(std::abs(a), std::abs(f));
                double rel_err = scale > 0 ? abs_err / scale : 0.0;
                p.max_abs_error = std::max(p.max_abs_error, abs_err);
                p.max_rel_error = std::max(p.max_rel_error, rel_err);
                if (!(abs_err <= abs_floor || rel_err <= rel_tol)) p.pass = false;
            }
        rep.points.push_back(std::move(p));
    }
    return rep;
}

// ---------------------------------------------------------------- RD axioms

namespace {

const std::vector<std::string> kScalarPool{
    "sin x * y",
    "let f z = z * x in f y + f x",
    "exp (x - y) * cos x",
    "(\\g:R -> R. g (g x)) (\\z. z * y)",
    "let p = (x * y, x + y) in p.0 * p.1 - sin p.0",
    "let h a b = a * b + x in h y x",
};

const std::vector<std::string> kPairPool{
    "(x * y, sin x)",
    "(exp x, x - y * y)",
    "let f z = z * y in (f x, f (f x))",
};

Hypernet program(const std::string& src) { return lambda::compile(src, std::vector<std::string>{"x", "y"}); }

/// Inputs copied into both nets.
Hypernet fan_out(const Hypernet& f, const Hypernet& g, bool add) {
    Hypernet out;
    NetBuilder b(out);
    auto x = b.inputs(f.input_types());
    std::vector<VertexId> a, c;
    for (auto v : x) {
        auto [p, q] = b.copy(v);
        a.push_back(p);
        c.push_back(q);
    }
    auto fo = b.embed(f, a);
    auto go = b.embed(g, c);
    if (add) {
        for (std::size_t i = 0; i < fo.size(); ++i) b.output(b.op1("add", {fo[i], go[i]}));
    } else {
        b.outputs(fo);
        b.outputs(go);
    }
    return out;
}

Hypernet zero_map(std::size_t n, std::size_t m) {
    Hypernet out;
    NetBuilder b(out);
    for (auto v : b.inputs(TypeList(n, Type::real()))) b.discard(v);
    for (std::size_t i = 0; i < m; ++i) b.output(b.constant(0.0));
    return out;
}

Hypernet projection0() {
    Hypernet out;
    NetBuilder b(out);
    auto x = b.inputs({Type::real(), Type::real()});
    b.discard(x[1]);
    b.output(x[0]);
    return out;
}

Hypernet discard2() {
    Hypernet out;
    NetBuilder b(out);
    for (auto v : b.inputs({Type::real(), Type::real()})) b.discard(v);
    return out;
}

struct Pool {
    std::map<std::string, std::unique_ptr<Differentiator>> cache;

    const Differentiator& get(const std::string& key, const std::function<Hypernet()>& build) {
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, std::make_unique<Differentiator>(build())).first;
        return *it->second;
    }
};

struct Checker {
    AxiomResult res;
    double tol;

    Checker(std::string name, double t) : tol(t) { res.name = std::move(name); }

    void compare(const std::vector<double>& l, const std::vector<double>& r, const std::string& what) {
        ++res.checks;
        bool ok = l.size() == r.size();
        for (std::size_t i = 0; ok && i < l.size(); ++i) {
            double scale = std::max({1.0, std::abs(l[i]), std::abs(r[i])});
            double err = std::abs(l[i] - r[i]) / scale;
            res.worst = std::max(res.worst, err);
            if (!(err <= tol)) ok = false;
        }
        if (!ok) {
            ++res.failures;
            if (res.first_failure.empty()) res.first_failure = what + ": " + vec(l) + " vs " + vec(r);
        }
    }
};

std::vector<double> plus(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

}  // namespace

std::vector<AxiomResult> check_rd_axioms(std::uint64_t seed, std::size_t points, double rel_tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    auto vec2 = [&] { return std::vector<double>{coord(rng), coord(rng)}; };
    auto vecn = [&](std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = coord(rng);
        return v;
    };
    Pool pool;
    auto scalar = [&](std::size_t i) { return pool.get("s" + std::to_string(i), [&] { return program(kScalarPool[i]); }); };
    auto pair = [&](std::size_t i) { return pool.get("p" + std::to_string(i), [&] { return program(kPairPool[i]); }); };
    const std::size_t ns = kScalarPool.size(), np = kPairPool.size();
    std::vector<AxiomResult> out;

    {  // RD.1: R[f+g] = R[f] + R[g], R[0] = 0.
        Checker c("RD.1", rel_tol);
        const auto& zero = pool.get("zero21", [] { return zero_map(2, 1); });
        for (std::size_t k = 0; k < points; ++k) {
            std::size_t i = pick(ns), j = pick(ns);
            const auto& sum = pool.get("sum" + std::to_string(i) + "_" + std::to_string(j),
                                       [&] { return fan_out(program(kScalarPool[i]), program(kScalarPool[j]), true); });
            auto x = vec2();
            std::vector<double> a{coord(rng)};
            c.compare(sum.vjp(x, a), plus(scalar(i).vjp(x, a), scalar(j).vjp(x, a)), "R[f+g]");
            c.compare(zero.vjp(x, a), {0.0, 0.0}, "R[0]");
        }
        out.push_back(c.res);
    }
    {  // RD.2: R[f](x, a+b) = R[f](x, a) + R[f](x, b), R[f](x, 0) = 0.
        Checker c("RD.2", rel_tol);
        for (std::size_t k = 0; k < points; ++k) {
            std::size_t i = pick(ns + np);
            const Differentiator& f = i < ns ? scalar(i) : pair(i - ns);
            auto x = vec2();
            auto a = vecn(f.coarity());
            auto b = vecn(f.coarity());
            c.compare(f.vjp(x, plus(a, b)), plus(f.vjp(x, a), f.vjp(x, b)), "R[f](x,a+b)");
            c.compare(f.vjp(x, std::vector<double>(f.coarity(), 0.0)), {0.0, 0.0}, "R[f](x,0)");
        }
        out.push_back(c.res);
    }
    {  // RD.3: structural maps.
        Checker c("RD.3", rel_tol);
        const auto& id = pool.get("id", [] { return identity_net({Type::real(), Type::real()}); });
        const auto& sw = pool.get("swap", [] { return swap_net({Type::real(), Type::real()}, 0); });
        const auto& p0 = pool.get("proj0", projection0);
        const auto& dc = pool.get("discard", discard2);
        for (std::size_t k = 0; k < points; ++k) {
            auto x = vec2();
            auto a = vec2();
            c.compare(id.vjp(x, a), a, "R[id]");
            c.compare(sw.vjp(x, a), {a[1], a[0]}, "R[swap]");
            c.compare(p0.vjp(x, {a[0]}), {a[0], 0.0}, "R[proj0]");
            c.compare(dc.vjp(x, {}), {0.0, 0.0}, "R[discard]");
        }
        out.push_back(c.res);
    }
    {  // RD.4: R[<f,g>](x, (a,b)) = R[f](x,a) + R[g](x,b).
        Checker c("RD.4", rel_tol);
        for (std::size_t k = 0; k < points; ++k) {
            std::size_t i = pick(ns), j = pick(np);
            const auto& pr = pool.get("pair" + std::to_string(i) + "_" + std::to_string(j),
                                      [&] { return fan_out(program(kScalarPool[i]), program(kPairPool[j]), false); });
            auto x = vec2();
            std::vector<double> a{coord(rng)};
            auto b = vec2();
            std::vector<double> ab{a[0], b[0], b[1]};
            c.compare(pr.vjp(x, ab), plus(scalar(i).vjp(x, a), pair(j).vjp(x, b)), "R[<f,g>]");
        }
        out.push_back(c.res);
    }
    {  // RD.5: R[f;g](x, c) = R[f](x, R[g](f(x), c)).
        Checker c("RD.5", rel_tol);
        for (std::size_t k = 0; k < points; ++k) {
            std::size_t i = pick(np), j = pick(ns + np);
            const std::string gsrc = j < ns ? kScalarPool[j] : kPairPool[j - ns];
            const auto& fg = pool.get("seq" + std::to_string(i) + "_" + std::to_string(j),
                                      [&] { return compose_seq(program(kPairPool[i]), program(gsrc)); });
            const Differentiator& f = pair(i);
            const Differentiator& g = j < ns ? scalar(j) : pair(j - ns);
            auto x = vec2();
            auto ct = vecn(g.coarity());
            c.compare(fg.vjp(x, ct), f.vjp(x, g.vjp(f.value(x), ct)), "R[f;g]");
        }
        out.push_back(c.res);
    }
    return out;
}

}  // namespace hyperad
