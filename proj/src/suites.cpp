#include "hyperad/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hyperad/ad.hpp"
#include "hyperad/construct.hpp"
#include "hyperad/dpo.hpp"
#include "hyperad/eval.hpp"
#include "hyperad/iso.hpp"
#include "hyperad/lambda.hpp"
#include "hyperad/random_nets.hpp"
#include "hyperad/rules.hpp"
#include "hyperad/serialize.hpp"
#include "hyperad/string_term.hpp"

namespace hyperad {

const std::vector<CorpusProgram>& gradient_corpus() {
    static const std::vector<CorpusProgram> corpus{
        {"let-mul", "let mul y = x*y in mul x + x", {"x"}},
        {"cubic", "x * x * x - 2.0 * x", {"x"}},
        {"trig-mix", "sin (x * y) + cos x * y", {"x", "y"}},
        {"closure-twice", "let f z = z * x in f (f y)", {"x", "y"}},
        {"higher-order-twice", "let twice (g:R -> R) a = g (g a) in twice (\\z. z * x) y", {"x", "y"}},
        {"unused-let", "let unused = exp x in x * y", {"x", "y"}},
        {"nested-lambda", "let k = \\a. \\b. a * b + x in k y x + k x x", {"x", "y"}},
        {"immediate-application", "(\\a b. a * sin b) x y", {"x", "y"}},
        {"inner-let-closure", "let f a = let g b = a * b * y in g a + g x in f (sin x)", {"x", "y"}},
        {"tuple-let", "let p = (x + y, x * y) in p.0 * exp p.1", {"x", "y"}},
        {"compose-primitive", "let compose (f:R -> R) (g:R -> R) a = f (g a) in compose sin (\\t. t * y) x", {"x", "y"}},
        {"constant-closure", "let c = \\u. x in c y + c x", {"x", "y"}},
        {"square-thrice", "let s a = a * a in s (s (s x)) * 0.1", {"x"}},
        {"closure-of-closure", "let f z = z * x in let g z = f z + f y in g (g x)", {"x", "y"}},
        {"primitive-chain", "neg (cos (exp (x * 0.5)))", {"x"}},
        {"let-chain", "let a = x * y in let b = a + x in let c = b * a in c - b", {"x", "y"}},
        {"curried-argument", "let curry (h:R -> R -> R) = h x y in curry (\\a b. a * a - b)", {"x", "y"}},
        {"adder", "let adder a = \\b. a + b * x in (adder y) x * (adder x) y", {"x", "y"}},
        {"apply-twice-sites", "let apply (f:R -> R) = f x + f y in apply (\\t. sin t * t) * apply exp", {"x", "y"}},
        {"tuple-swap", "let pair = (sin x, cos y) in let swap (q:(R, R)) = (q.1, q.0) in (swap pair).0 * x", {"x", "y"}},
        {"unused-parameter", "let unused f = 1.0 in let z = x * 3.0 in z * z - y + unused x", {"x", "y"}},
        {"self-application-site", "(\\f:R -> R. \\a. f (f a)) (\\b. b * y + x) x", {"x", "y"}},
        {"gaussian", "let h = \\a. exp (neg (a * a)) in h x * h y + h (x - y)", {"x", "y"}},
        {"vector-output", "(x * y, sin x + y, let f z = z * z in f (x + y))", {"x", "y"}},
        {"three-inputs", "let f a b = a * b + z in f x y * f y z", {"x", "y", "z"}},
    };
    return corpus;
}

namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

std::size_t below(Rng& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

Rng rng_for(const CheckOptions& opt, std::uint64_t tag) { return Rng(opt.seed * 0x9E3779B97F4A7C15ULL + tag); }

std::vector<double> random_point(Rng& rng, std::size_t n, double lo = -1.5, double hi = 1.5) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

/// Relative closeness; identical values (including overflowed ones) agree.
bool close(double a, double b, double tol) {
    if (a == b || (std::isnan(a) && std::isnan(b))) return true;
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Runs a check body, timing it and turning exceptions into failures.
CheckResult timed(std::string id, std::string title, const std::function<void(CheckResult&)>& body,
                  double time_limit = 0.0) {
    CheckResult r;
    r.id = std::move(id);
    r.title = std::move(title);
    auto t0 = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (time_limit > 0.0 && r.seconds > time_limit) {
        r.pass = false;
        r.detail += "; exceeded the " + format_real(time_limit) + " s budget";
    }
    return r;
}

/// First failure is kept as the detail.
struct Failures {
    std::size_t count = 0;
    std::string first;

    void add(const std::string& what) {
        if (count++ == 0) first = what;
    }
};

std::string net_text(const Hypernet& h) { return to_json_string(h, -1); }

}  // namespace

CheckResult check_worked_example(const CheckOptions&) {
    return timed("C1", "worked example: d/dx (let mul y = x*y in mul x + x) = 2x+1", [](CheckResult& r) {
        Failures f;
        Differentiator d(lambda::compile("let mul y = x*y in mul x + x"));
        for (double x : {-2.0, -1.0, 0.0, 0.5, 3.0}) {
            ++r.cases;
            double g = d.jacobian({x})[0][0];
            if (!(std::abs(g - (2 * x + 1)) <= 1e-9))
                f.add("x=" + format_real(x) + ": got " + format_real(g) + ", want " + format_real(2 * x + 1));
        }
        r.pass = f.count == 0;
        r.detail = r.pass ? "5 points within 1e-9" : f.first;
    }, 1.0);
}

CheckResult check_corpus(const CheckOptions& opt) {
    return timed("C2", "gradient corpus against central finite differences", [&](CheckResult& r) {
        Rng rng = rng_for(opt, 2);
        Failures f;
        for (const auto& p : gradient_corpus()) {
            ++r.cases;
            try {
                Hypernet h = lambda::compile(p.source, p.vars);
                std::vector<std::vector<double>> pts;
                for (int k = 0; k < 5; ++k) pts.push_back(random_point(rng, p.vars.size()));
                auto rep = compare_with_finite_differences(h, pts, p.name);
                if (!rep.pass()) f.add(p.name + ": " + rep.text());
            } catch (const std::exception& e) {
                f.add(p.name + ": " + e.what());
            }
        }
        r.pass = f.count == 0 && r.cases >= 20;
        r.detail = r.pass ? std::to_string(r.cases) + " programs x 5 points" : f.first;
    }, 30.0);
}

CheckResult check_diamond(const CheckOptions& opt) {
    return timed("C3", "diamond property of forward and reverse rewriting", [&](CheckResult& r) {
        Rng rng = rng_for(opt, 3);
        RandomNetOptions no;
        no.max_edges = 12;
        no.max_depth = 2;
        no.first_order = false;
        Failures f;
        std::size_t fwd_pairs = 0, rev_pairs = 0;
        for (int n = 0; n < 500; ++n) {
            Hypernet h = random_net(rng, no);
            ++r.cases;
            const std::size_t nout = h.outputs().size();
            // Forward: the ledger is in processing order, so its wires may be permuted.
            std::vector<EdgeId> done;
            for (;;) {
                auto fr = forward_fringe(h, done);
                if (fr.empty()) break;
                for (std::size_t i = 0; i < fr.size(); ++i)
                    for (std::size_t j = i + 1; j < fr.size(); ++j) {
                        auto ab = done, ba = done;
                        ab.insert(ab.end(), {fr[i], fr[j]});
                        ba.insert(ba.end(), {fr[j], fr[i]});
                        Hypernet x = forward_partial(h, ab), y = forward_partial(h, ba);
                        IsoOptions io;
                        io.free_outputs = free_suffix(x.outputs().size(), x.outputs().size() - nout);
                        ++fwd_pairs;
                        if (!isomorphic(x, y, io))
                            f.add("forward pair e" + std::to_string(fr[i]) + "/e" + std::to_string(fr[j]) + " on " + net_text(h));
                    }
                done.push_back(fr[below(rng, fr.size())]);
            }
            done.clear();
            for (;;) {
                auto fr = reverse_fringe(h, done);
                if (fr.empty()) break;
                for (std::size_t i = 0; i < fr.size(); ++i)
                    for (std::size_t j = i + 1; j < fr.size(); ++j) {
                        auto ab = done, ba = done;
                        ab.insert(ab.end(), {fr[i], fr[j]});
                        ba.insert(ba.end(), {fr[j], fr[i]});
                        ++rev_pairs;
                        if (!isomorphic(reverse_partial(h, ab), reverse_partial(h, ba)))
                            f.add("reverse pair e" + std::to_string(fr[i]) + "/e" + std::to_string(fr[j]) + " on " + net_text(h));
                    }
                done.push_back(fr[below(rng, fr.size())]);
            }
        }
        r.pass = f.count == 0 && fwd_pairs > 0 && rev_pairs > 0;
        r.detail = std::to_string(fwd_pairs) + " forward and " + std::to_string(rev_pairs) + " reverse critical pairs, " +
                   std::to_string(f.count) + " failures" + (f.count ? "; first: " + f.first : "");
    });
}

CheckResult check_beta(const CheckOptions& opt) {
    return timed("C4", "beta reduction preserves gradients", [&](CheckResult& r) {
        Rng rng = rng_for(opt, 4);
        RandomNetOptions no;
        no.max_edges = 12;
        no.max_depth = 2;
        Schema br = schemata::beta();
        Failures f;
        std::size_t attempts = 0;
        while (r.cases < 200 && attempts < 100000) {
            ++attempts;
            Hypernet h = random_net(rng, no);
            auto found = br.find(h, 0, false);
            if (found.empty()) continue;
            const Instance& inst = found[below(rng, found.size())];
            Hypernet reduct = apply(inst.rule, h, inst.match).net;
            ++r.cases;
            auto x = random_point(rng, h.inputs().size(), -1.0, 1.0);
            auto ga = Differentiator(h).jacobian(x);
            auto gb = Differentiator(reduct).jacobian(x);
            bool ok = ga.size() == gb.size();
            for (std::size_t i = 0; ok && i < ga.size(); ++i)
                for (std::size_t j = 0; ok && j < ga[i].size(); ++j) ok = close(ga[i][j], gb[i][j], 1e-9);
            if (!ok) f.add("gradients differ on " + net_text(h));
        }
        r.pass = f.count == 0 && r.cases == 200;
        r.detail = std::to_string(r.cases) + " redex/reduct pairs" + (f.count ? "; first failure: " + f.first : "");
    });
}

CheckResult check_chain_rule(const CheckOptions& opt) {
    return timed("C5", "forward and reverse passes respect composition", [&](CheckResult& r) {
        Rng rng = rng_for(opt, 5);
        RandomNetOptions no;
        no.max_edges = 8;
        no.max_depth = 2;
        Failures f;
        for (int n = 0; n < 200; ++n) {
            Hypernet a = random_net(rng, no);
            RandomNetOptions go = no;
            go.inputs = a.output_types();
            Hypernet b = random_net(rng, go);
            Hypernet ab = compose_seq(a, b);
            ++r.cases;

            Hypernet fa = forward_pass(a), fb = forward_pass(b), fab = forward_pass(ab);
            TypeList la = ledger_types(a), lb = ledger_types(b);
            Hypernet fwd = compose_seq(fa, compose_par(fb, identity_net(la)));
            IsoOptions fo;
            const std::size_t fout = fab.outputs().size();
            fo.free_outputs = free_suffix(fout, la.size() + lb.size());
            if (!isomorphic(fab, fwd, fo)) f.add("forward of " + net_text(ab));

            Hypernet ra = reverse_pass(a), rb = reverse_pass(b), rab = reverse_pass(ab);
            Hypernet rev = compose_seq(compose_par(identity_net(la), rb), ra);
            IsoOptions ro;
            ro.free_inputs = free_prefix(rab.inputs().size(), la.size() + lb.size());
            if (!isomorphic(rab, rev, ro)) f.add("reverse of " + net_text(ab));
        }
        r.pass = f.count == 0;
        r.detail = std::to_string(r.cases) + " composable pairs" + (f.count ? "; first failure: " + f.first : "");
    });
}

CheckResult check_definability(const CheckOptions& opt) {
    return timed("C6", "every net is the interpretation of its read-back term", [&](CheckResult& r) {
        Rng rng = rng_for(opt, 6);
        RandomNetOptions no;
        no.max_edges = 15;
        no.max_depth = 3;
        no.first_order = false;
        no.require_output = false;
        Failures f;
        for (int n = 0; n < 500; ++n) {
            Hypernet h = random_net(rng, no);
            ++r.cases;
            if (!isomorphic(interpret(*readback(h)), h)) f.add(net_text(h));
        }
        r.pass = f.count == 0;
        r.detail = std::to_string(r.cases) + " nets" + (f.count ? "; first failure: " + f.first : "");
    });
}

namespace {

/// x |-> (\y. s * y) with s = sin x outside the box.
Hypernet dpo_example_host() {
    Hypernet g;
    NetBuilder b(g);
    VertexId x = b.input(Type::real());
    VertexId s = b.op1("sin", {x});
    std::vector<VertexId> cap{s};
    b.output(b.box(cap, {Type::real()}, [](NetBuilder& in, std::span<const VertexId> w) {
        return std::vector<VertexId>{in.op1("mul", {w[0], w[1]})};
    }));
    return g;
}

Hypernet dpo_example_context() {
    Hypernet g;
    NetBuilder b(g);
    b.input(Type::real());
    b.output(b.fresh(Type::arrow({Type::real()}, {Type::real()})));
    return g;
}

Hypernet dpo_example_result() {
    Hypernet g;
    NetBuilder b(g);
    VertexId x = b.input(Type::real());
    std::vector<VertexId> cap{x};
    b.output(b.box(cap, {Type::real()}, [](NetBuilder& in, std::span<const VertexId> w) {
        return std::vector<VertexId>{in.op1("mul", {in.op1("sin", {w[0]}), w[1]})};
    }));
    return g;
}

}  // namespace

CheckResult check_dpo_example(const CheckOptions&) {
    return timed("C7", "pushout example: sin moves into the closure and back", [](CheckResult& r) {
        Failures f;
        Hypernet g = dpo_example_host();
        auto found = schemata::lamb().find(g, 0, false);
        r.cases = 1;
        if (found.size() != 1) {
            f.add("expected one instance, found " + std::to_string(found.size()));
        } else {
            const Instance& inst = found[0];
            if (find_matches(inst.rule, g).size() != 1) f.add("rule left side does not match exactly once");
            Context ctx = pushout_complement(g, inst.rule, inst.match);
            if (!isomorphic(ctx.net, dpo_example_context())) f.add("context differs: " + net_text(ctx.net));
            Rewritten h = pushout_glue(ctx, inst.rule);
            if (!isomorphic(h.net, dpo_example_result())) f.add("result differs: " + net_text(h.net));
            Rewritten back = apply(inst.rule.reversed(), h.net, h.residual);
            if (!isomorphic(back.net, g)) f.add("reversed rule does not restore the host: " + net_text(back.net));
        }
        r.pass = f.count == 0;
        r.detail = r.pass ? "context, result and reversal match the hand-built nets" : f.first;
    });
}

CheckResult check_substitution(const CheckOptions& opt) {
    return timed("C8", "substitution rules preserve evaluation", [&](CheckResult& r) {
        Rng rng = rng_for(opt, 8);
        RandomNetOptions no;
        no.max_edges = 12;
        no.max_depth = 2;
        const std::vector<Schema> rules{schemata::beta(), schemata::var(), schemata::discard_natural(false),
                                        schemata::copy_natural(false), schemata::lamb(), schemata::comp()};
        std::map<std::string, std::size_t> fired;
        std::size_t ce = 0;
        Failures f;
        for (int n = 0; n < 300; ++n) {
            Hypernet h = random_net(rng, no);
            ++r.cases;
            auto x = random_point(rng, h.inputs().size(), -1.0, 1.0);
            const auto before = eval_numeric(h, x);
            for (const auto& s : rules) {
                auto found = s.find(h, 0, false);
                if (found.empty()) continue;
                const Instance& inst = found[below(rng, found.size())];
                Hypernet after = apply(inst.rule, h, inst.match).net;
                auto v = eval_numeric(after, x);
                ++fired[s.name];
                bool ok = v.size() == before.size();
                for (std::size_t i = 0; ok && i < v.size(); ++i) ok = close(v[i], before[i], 1e-12);
                if (!ok) f.add(s.name + " changed the value of " + net_text(h));
            }
            for (const auto& inst : schemata::exchange().find(h, 0, false)) {
                ++ce;
                if (!isomorphic(inst.rule.lhs, inst.rule.rhs)) f.add("CE sides differ on " + net_text(h));
                Rewritten one = apply(inst.rule, h, inst.match);
                Rewritten other = apply(inst.rule.reversed(), one.net, one.residual);
                if (!isomorphic(one.net, h) || !isomorphic(other.net, h)) f.add("CE orientations differ on " + net_text(h));
            }
        }
        std::string counts;
        for (const auto& s : rules) {
            counts += s.name + "=" + std::to_string(fired[s.name]) + " ";
            if (fired[s.name] == 0) f.add(s.name + " never applied");
        }
        counts += "CE=" + std::to_string(ce);
        if (ce == 0) f.add("CE never applied");
        r.pass = f.count == 0;
        r.detail = counts + (f.count ? "; first failure: " + f.first : "");
    });
}

CheckResult check_rd(const CheckOptions& opt) {
    return timed("C9", "reverse derivative axioms RD.1-RD.5", [&](CheckResult& r) {
        auto res = check_rd_axioms(opt.seed, 100, 1e-6);
        r.pass = true;
        std::ostringstream os;
        for (const auto& a : res) {
            r.cases += a.checks;
            r.pass = r.pass && a.pass();
            os << a.name << (a.pass() ? " ok" : " FAIL") << " (" << a.checks << " checks, worst " << format_real(a.worst) << ")";
            if (!a.pass()) os << " [" << a.first_failure << "]";
            os << "; ";
        }
        r.detail = os.str();
    });
}

CheckResult check_smc(const CheckOptions& opt) {
    return timed("C10", "terms equal by monoidal laws elaborate to isomorphic nets", [&](CheckResult& r) {
        Rng rng = rng_for(opt, 10);
        Failures f;
        std::size_t changed = 0;
        for (int n = 0; n < 300; ++n) {
            TypeList dom(1 + below(rng, 3), Type::real());
            RandomTermOptions to;
            to.size = 6 + below(rng, 7);
            auto t = random_term(rng, dom, to);
            auto u = smc_shuffle(rng, t, 1 + below(rng, 4));
            ++r.cases;
            if (!(*t == *u)) ++changed;
            if (!isomorphic(interpret(*t), interpret(*u))) f.add(to_string(*t) + "  vs  " + to_string(*u));
        }
        r.pass = f.count == 0;
        r.detail = std::to_string(r.cases) + " pairs (" + std::to_string(changed) + " syntactically distinct)" +
                   (f.count ? "; first failure: " + f.first : "");
    });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"oracle", "rd", "dpo", "diamond", "beta", "chain", "definability", "smc", "all"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const CheckOptions& opt) {
    using Fn = CheckResult (*)(const CheckOptions&);
    static const std::map<std::string, std::vector<Fn>> suites{
        {"oracle", {check_worked_example, check_corpus}},
        {"rd", {check_rd}},
        {"dpo", {check_dpo_example, check_substitution}},
        {"diamond", {check_diamond}},
        {"beta", {check_beta}},
        {"chain", {check_chain_rule}},
        {"definability", {check_definability}},
        {"smc", {check_smc}},
        {"all",
         {check_worked_example, check_corpus, check_diamond, check_beta, check_chain_rule, check_definability,
          check_dpo_example, check_substitution, check_rd, check_smc}},
    };
    auto it = suites.find(name);
    if (it == suites.end()) throw std::invalid_argument("unknown suite '" + name + "'");
    std::vector<CheckResult> out;
    for (Fn fn : it->second) out.push_back(fn(opt));
    return out;
}

}  // namespace hyperad
