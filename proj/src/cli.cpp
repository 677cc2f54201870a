#include "hyperad/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hyperad/ad.hpp"
#include "hyperad/eval.hpp"
#include "hyperad/lambda.hpp"
#include "hyperad/rules.hpp"
#include "hyperad/serialize.hpp"
#include "hyperad/suites.hpp"
#include "hyperad/validate.hpp"

namespace hyperad::cli {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string expr;
    std::string input;
    std::string at;
    std::string vars;
    std::string format = "json";
    std::string output;
    std::string rules;
    std::string pullbacks;
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::size_t fuel = 1'000'000;
    bool oracle = false;
    bool outermost = false;
    bool show_graph = false;
};

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& text) {
    auto p = text.find_first_not_of(" \t\r\n");
    return p != std::string::npos && text[p] == '{';
}

/// The input net: an inline program, a program file, or a serialized graph.
Hypernet load_net(const Options& o) {
    if (!o.expr.empty() && !o.input.empty()) throw UsageError("give either -e or an input file, not both");
    std::optional<std::vector<std::string>> vars;
    if (!o.vars.empty()) vars = split_commas(o.vars);
    if (!o.expr.empty()) return lambda::compile(o.expr, vars);
    if (o.input.empty()) throw UsageError("no program: use -e PROGRAM or give an input file");
    std::string text = read_file(o.input);
    if (looks_like_json(text)) {
        Hypernet h = from_json_string(text);
        require_well_typed(h, o.input);
        return h;
    }
    return lambda::compile(text, vars);
}

std::vector<double> parse_point(const Options& o, std::size_t arity) {
    std::vector<double> x;
    for (const auto& item : split_commas(o.at)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw UsageError("--at: '" + item + "' is not a number");
        x.push_back(v);
    }
    if (x.size() != arity)
        throw UsageError("the program takes " + std::to_string(arity) + " input" + (arity == 1 ? "" : "s") + ", --at gave " +
                         std::to_string(x.size()));
    return x;
}

PullbackRegistry registry(const Options& o) {
    PullbackRegistry reg = PullbackRegistry::builtin();
    if (!o.pullbacks.empty()) {
        RulePack pack = rule_pack_from_json(nlohmann::json::parse(read_file(o.pullbacks)));
        for (auto& [op, net] : pack.pullbacks) reg.add(op, std::move(net));
    }
    return reg;
}

std::string render(const Hypernet& h, const std::string& format) {
    if (format == "json") return to_json_string(h) + "\n";
    if (format == "dot") return to_dot(h);
    if (format == "text") return to_text(h);
    throw UsageError("unknown format '" + format + "' (dot, json or text)");
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.output + "'");
    f << text;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
    return s;
}

int cmd_elaborate(const Options& o, std::ostream& out) {
    emit(o, render(load_net(o), o.format), out);
    return kOk;
}

int cmd_adjoint(const Options& o, std::ostream& out) {
    emit(o, render(adjoint(load_net(o), registry(o)), o.format), out);
    return kOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
    Hypernet h = load_net(o);
    CompiledNet f(h, o.fuel);
    auto y = f(parse_point(o, f.arity()));
    if (o.format == "json")
        out << nlohmann::json{{"value", y}}.dump() << "\n";
    else
        out << join(y) << "\n";
    return kOk;
}

int cmd_grad(const Options& o, std::ostream& out) {
    Hypernet h = load_net(o);
    PullbackRegistry reg = registry(o);
    Differentiator d(h, reg, o.fuel);
    auto x = parse_point(o, d.arity());
    if (o.oracle) {
        auto rep = compare_with_finite_differences(h, {x});
        out << (o.format == "json" ? rep.json().dump(2) + "\n" : rep.text());
        return rep.pass() ? kOk : kVerificationFailed;
    }
    auto jac = d.jacobian(x);
    if (o.format == "json") {
        out << nlohmann::json{{"point", x}, {"value", d.value(x)}, {"jacobian", jac}}.dump() << "\n";
    } else {
        for (const auto& row : jac) out << join(row) << "\n";
    }
    return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
    CheckOptions co;
    co.seed = o.seed;
    auto results = run_suite(o.suite, co);
    bool ok = true;
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : results) {
        ok = ok && r.pass;
        if (o.format == "json") {
            records.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"cases", r.cases},
                               {"seconds", r.seconds}, {"detail", r.detail}});
        } else {
            out << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.title << ": " << r.detail << "\n";
        }
    }
    if (o.format == "json") out << records.dump(2) << "\n";
    return ok ? kOk : kVerificationFailed;
}

int cmd_rewrite(const Options& o, std::ostream& out) {
    if (o.input.empty()) throw UsageError("rewrite needs a graph file");
    if (o.rules.empty()) throw UsageError("rewrite needs --rules (a rule pack file or built-in rule names)");
    Hypernet h = from_json_string(read_file(o.input));
    require_well_typed(h, o.input);
    std::vector<Schema> rules;
    std::ifstream probe(o.rules);
    if (probe) {
        for (const auto& r : rule_pack_from_json(nlohmann::json::parse(read_file(o.rules))).rules) rules.push_back(schema_from_rule(r));
    } else {
        for (const auto& name : split_commas(o.rules)) {
            auto s = schema_by_name(name);
            if (!s) throw UsageError("unknown rule '" + name + "'");
            rules.push_back(*s);
        }
    }
    NormalizeOptions no;
    no.fuel = o.fuel;
    no.outermost_only = o.outermost;
    auto res = normalize(h, rules, no);
    for (std::size_t i = 0; i < res.trace.size(); ++i) out << "step " << (i + 1) << ": " << res.trace[i] << "\n";
    out << res.trace.size() << " step" << (res.trace.size() == 1 ? "" : "s") << "\n";
    if (!o.output.empty() || o.show_graph) emit(o, render(res.net, o.format), out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reverse-mode differentiation of a higher-order language via hypernet rewriting", "hyperad"};
    app.require_subcommand(1);
    Options o;

    auto program = [&](CLI::App* sub) {
        sub->add_option("-e,--expr", o.expr, "Inline program");
        sub->add_option("input", o.input, "Program file or serialized graph (JSON)");
        sub->add_option("--vars", o.vars, "Input variable order, comma separated");
        sub->add_option("--fuel", o.fuel, "Maximum rewrite steps");
    };
    auto graph_out = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"dot", "json", "text"}));
        sub->add_option("-o,--output", o.output, "Write the graph to a file");
    };

    auto* elab = app.add_subcommand("elaborate", "Translate a program into a hypernet");
    program(elab);
    graph_out(elab);

    auto* adj = app.add_subcommand("adjoint", "Reverse-mode adjoint of a program");
    program(adj);
    graph_out(adj);
    adj->add_option("--pullbacks", o.pullbacks, "Rule pack with extra pullbacks");

    auto* ev = app.add_subcommand("eval", "Evaluate a program at a point");
    program(ev);
    ev->add_option("--at", o.at, "Input values, comma separated");
    ev->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));

    auto* gr = app.add_subcommand("grad", "Gradient (Jacobian rows) of a program at a point");
    program(gr);
    gr->add_option("--at", o.at, "Input values, comma separated");
    gr->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    gr->add_option("--pullbacks", o.pullbacks, "Rule pack with extra pullbacks");
    gr->add_flag("--oracle", o.oracle, "Compare against central finite differences");

    auto* ch = app.add_subcommand("check", "Run verification suites");
    ch->add_option("--suite", o.suite, "Suite to run")->check(CLI::IsMember(suite_names()));
    ch->add_option("--seed", o.seed, "Random seed");
    ch->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));

    auto* rw = app.add_subcommand("rewrite", "Normalize a graph with a rule pack and print the step trace");
    rw->add_option("input", o.input, "Serialized graph (JSON)");
    rw->add_option("--rules", o.rules, "Rule pack file, or built-in rule names (comma separated)");
    rw->add_option("--fuel", o.fuel, "Maximum rewrite steps");
    rw->add_flag("--outermost", o.outermost, "Only rewrite at the outermost level");
    graph_out(rw);

    // Text is the natural default for numeric and check output; graphs default to JSON.
    for (auto* sub : {ev, gr, ch}) sub->callback([&o, sub] {
        if (sub->count("--format") == 0) o.format = "text";
    });
    rw->callback([&o, rw] { o.show_graph = rw->count("--format") != 0; });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (elab->parsed()) return cmd_elaborate(o, out);
        if (adj->parsed()) return cmd_adjoint(o, out);
        if (ev->parsed()) return cmd_eval(o, out);
        if (gr->parsed()) return cmd_grad(o, out);
        if (ch->parsed()) return cmd_check(o, out);
        if (rw->parsed()) return cmd_rewrite(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const lambda::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const SerializationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return kUsage;
    } catch (const lambda::TypeCheckError& e) {
        err << "type error: " << e.what() << "\n";
        return kTypeError;
    } catch (const TypeError& e) {
        err << "type error: " << e.what() << "\n";
        return kTypeError;
    } catch (const AdError& e) {
        err << "error: " << e.what() << "\n";
        return kTypeError;
    } catch (const FuelExhausted& e) {
        err << "fuel exhausted: " << e.what() << "\n";
        return kFuelExhausted;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kVerificationFailed;
    }
    return kUsage;
}

}  // namespace hyperad::cli
