#include "hyperad/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <map>
#include <set>

#include "hyperad/signature.hpp"

namespace hyperad::lambda {

FrontendError::FrontendError(const std::string& message, SourcePos p)
    : Error("line " + std::to_string(p.line) + ", column " + std::to_string(p.column) + ": " + message),
      pos(p),
      bare_message(message) {}

// ---------------------------------------------------------------- types

STypePtr SType::real() {
    static const STypePtr r = std::make_shared<const SType>();
    return r;
}

STypePtr SType::arrow(STypePtr from, STypePtr to) {
    SType t;
    t.kind = Kind::Arrow;
    t.items = {std::move(from), std::move(to)};
    return std::make_shared<const SType>(std::move(t));
}

STypePtr SType::tuple(std::vector<STypePtr> items) {
    SType t;
    t.kind = Kind::Tuple;
    t.items = std::move(items);
    return std::make_shared<const SType>(std::move(t));
}

bool operator==(const SType& a, const SType& b) {
    if (a.kind != b.kind || a.items.size() != b.items.size()) return false;
    for (std::size_t i = 0; i < a.items.size(); ++i)
        if (!(*a.items[i] == *b.items[i])) return false;
    return true;
}

std::string to_string(const SType& t) {
    switch (t.kind) {
        case SType::Kind::Real: return "R";
        case SType::Kind::Arrow: {
            std::string from = to_string(*t.items[0]);
            if (t.items[0]->kind == SType::Kind::Arrow) from = "(" + from + ")";
            return from + " -> " + to_string(*t.items[1]);
        }
        case SType::Kind::Tuple: {
            std::string s = "(";
            for (std::size_t i = 0; i < t.items.size(); ++i) s += (i ? ", " : "") + to_string(*t.items[i]);
            return s + ")";
        }
    }
    return "?";
}

TypeList wires(const SType& t) {
    switch (t.kind) {
        case SType::Kind::Real: return {Type::real()};
        case SType::Kind::Arrow: return {Type::arrow(wires(*t.items[0]), wires(*t.items[1]))};
        case SType::Kind::Tuple: {
            TypeList out;
            for (const auto& it : t.items) {
                auto w = wires(*it);
                out.insert(out.end(), w.begin(), w.end());
            }
            return out;
        }
    }
    return {};
}

// ---------------------------------------------------------------- lexer

namespace {

const std::set<std::string> kPrimitives{"sin", "cos", "exp", "neg"};

struct Token {
    enum class Kind { Ident, Number, Sym, Let, In, End } kind;
    std::string text;
    double number = 0.0;
    bool integral = false;
    SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        const std::size_t start = i;
        const std::size_t before = out.size();
        auto record = [&] {
            if (out.size() > before) spans.emplace_back(start, i);
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            std::string word(src.substr(i, j - i));
            Token::Kind k = word == "let" ? Token::Kind::Let : word == "in" ? Token::Kind::In : Token::Kind::Ident;
            out.push_back({k, word, 0.0, false, pos});
            advance(j - i);
            record();
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            // `t.0.1`: digits glued to a dot glued to an atom are projection indices.
            const bool after_dot = out.size() >= 2 && out.back().kind == Token::Kind::Sym && out.back().text == "." &&
                                   spans.back().second == i && spans[spans.size() - 2].second == spans.back().first &&
                                   (out[out.size() - 2].kind == Token::Kind::Ident ||
                                    out[out.size() - 2].kind == Token::Kind::Number || out[out.size() - 2].text == ")");
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            bool integral = true;
            if (!after_dot) {
                if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                    integral = false;
                    ++j;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                }
                if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                    std::size_t k = j + 1;
                    if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                    if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                        integral = false;
                        j = k;
                        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                    }
                }
            }
            std::string text(src.substr(i, j - i));
            double v = 0.0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc()) throw ParseError("malformed number '" + text + "'", pos);
            out.push_back({Token::Kind::Number, text, v, integral, pos});
            advance(j - i);
            record();
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Token::Kind::Sym, "->", 0.0, false, pos});
            advance(2);
            record();
            continue;
        }
        if (std::string_view("\\.:(),+-*=").find(c) != std::string_view::npos) {
            out.push_back({Token::Kind::Sym, std::string(1, c), 0.0, false, pos});
            advance(1);
            record();
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({Token::Kind::End, "", 0.0, false, {line, col}});
    return out;
}

std::string describe(const Token& t) {
    switch (t.kind) {
        case Token::Kind::End: return "end of input";
        case Token::Kind::Number: return "number " + t.text;
        case Token::Kind::Ident: return "identifier '" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

// ---------------------------------------------------------------- parser

TermPtr mk(Term t) { return std::make_shared<const Term>(std::move(t)); }

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    TermPtr program() {
        TermPtr t = expr();
        if (peek().kind != Token::Kind::End) fail("expected end of input");
        return t;
    }

    STypePtr type_only() {
        STypePtr t = type();
        if (peek().kind != Token::Kind::End) fail("expected end of type");
        return t;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    int fresh_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Token::Kind::Sym && peek(k).text == s; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + ", found " + describe(peek()), peek().pos);
    }

    const Token& take() { return toks_[i_++]; }

    void expect(const char* s) {
        if (!is_sym(s)) fail(std::string("expected '") + s + "'");
        take();
    }

    std::string ident(const char* what) {
        if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what);
        if (kPrimitives.count(peek().text)) fail(std::string("primitive name cannot be used as ") + what);
        return take().text;
    }

    STypePtr type() {
        STypePtr from = type_atom();
        if (is_sym("->")) {
            take();
            return SType::arrow(from, type());
        }
        return from;
    }

    STypePtr type_atom() {
        if (peek().kind == Token::Kind::Ident && peek().text == "R") {
            take();
            return SType::real();
        }
        if (is_sym("(")) {
            take();
            std::vector<STypePtr> items{type()};
            while (is_sym(",")) {
                take();
                items.push_back(type());
            }
            expect(")");
            return items.size() == 1 ? items[0] : SType::tuple(std::move(items));
        }
        fail("expected a type");
    }

    struct Param {
        std::string name;
        STypePtr type;
        SourcePos pos;
    };

    /// `x`, `x:T` or `(x:T)`.
    std::optional<Param> param(bool allow_bare_annotation) {
        SourcePos pos = peek().pos;
        if (peek().kind == Token::Kind::Ident) {
            std::string name = ident("a parameter name");
            STypePtr t = SType::real();
            if (allow_bare_annotation && is_sym(":")) {
                take();
                t = type();
            }
            return Param{name, t, pos};
        }
        if (is_sym("(") && peek(1).kind == Token::Kind::Ident && peek(2).kind == Token::Kind::Sym && peek(2).text == ":") {
            take();
            std::string name = ident("a parameter name");
            expect(":");
            STypePtr t = type();
            expect(")");
            return Param{name, t, pos};
        }
        return std::nullopt;
    }

    TermPtr lambdas(const std::vector<Param>& ps, std::size_t k, TermPtr body) {
        if (k == ps.size()) return body;
        Term t;
        t.kind = Term::Kind::Lam;
        t.pos = ps[k].pos;
        t.name = ps[k].name;
        t.param_type = ps[k].type;
        t.kids = {lambdas(ps, k + 1, std::move(body))};
        return mk(std::move(t));
    }

    TermPtr expr() {
        if (is_sym("\\")) {
            take();
            std::vector<Param> ps;
            while (auto p = param(true)) ps.push_back(*p);
            if (ps.empty()) fail("expected a lambda parameter");
            expect(".");
            return lambdas(ps, 0, expr());
        }
        if (peek().kind == Token::Kind::Let) {
            SourcePos pos = take().pos;
            std::string name = ident("a let-bound name");
            std::vector<Param> ps;
            while (auto p = param(true)) ps.push_back(*p);
            expect("=");
            TermPtr bound = lambdas(ps, 0, expr());
            if (peek().kind != Token::Kind::In) fail("expected 'in'");
            take();
            Term t;
            t.kind = Term::Kind::Let;
            t.pos = pos;
            t.name = name;
            t.kids = {bound, expr()};
            return mk(std::move(t));
        }
        return sum();
    }

    TermPtr prim(const std::string& name, SourcePos pos, std::vector<TermPtr> args) {
        Term t;
        t.kind = Term::Kind::Prim;
        t.pos = pos;
        t.name = name;
        t.kids = std::move(args);
        return mk(std::move(t));
    }

    TermPtr sum() {
        TermPtr lhs = product();
        while (is_sym("+") || is_sym("-")) {
            const Token& op = take();
            lhs = prim(op.text == "+" ? "add" : "sub", op.pos, {lhs, product()});
        }
        return lhs;
    }

    TermPtr product() {
        TermPtr lhs = unary();
        while (is_sym("*")) {
            const Token& op = take();
            lhs = prim("mul", op.pos, {lhs, unary()});
        }
        return lhs;
    }

    TermPtr unary() {
        if (is_sym("-")) {
            SourcePos pos = take().pos;
            TermPtr arg = unary();
            if (arg->kind == Term::Kind::Const) {
                Term c = *arg;
                c.value = -c.value;
                c.pos = pos;
                return mk(std::move(c));
            }
            return prim("neg", pos, {arg});
        }
        return application();
    }

    bool starts_atom() const {
        const Token& t = peek();
        return t.kind == Token::Kind::Ident || t.kind == Token::Kind::Number || is_sym("(");
    }

    bool starts_trailing() const { return is_sym("\\") || peek().kind == Token::Kind::Let; }

    std::vector<TermPtr> arguments() {
        std::vector<TermPtr> args;
        for (;;) {
            if (starts_atom()) {
                args.push_back(postfix());
            } else if (starts_trailing()) {
                args.push_back(expr());
                break;
            } else {
                break;
            }
        }
        return args;
    }

    TermPtr application() {
        if (peek().kind == Token::Kind::Ident && kPrimitives.count(peek().text)) {
            const Token& head = take();
            std::string name = head.text;
            SourcePos pos = head.pos;
            auto args = arguments();
            if (!args.empty()) return prim(name, pos, std::move(args));
            return eta_prim(name, pos);
        }
        TermPtr fn = postfix();
        for (auto& a : arguments()) {
            Term t;
            t.kind = Term::Kind::App;
            t.pos = a->pos;
            t.kids = {fn, a};
            fn = mk(std::move(t));
        }
        return fn;
    }

    TermPtr eta_prim(const std::string& name, SourcePos pos) {
        std::string p = "_" + name + std::to_string(++fresh_);
        Term v;
        v.kind = Term::Kind::Var;
        v.pos = pos;
        v.name = p;
        Term lam;
        lam.kind = Term::Kind::Lam;
        lam.pos = pos;
        lam.name = p;
        lam.param_type = SType::real();
        lam.kids = {prim(name, pos, {mk(std::move(v))})};
        return mk(std::move(lam));
    }

    TermPtr postfix() {
        TermPtr t = atom();
        while (is_sym(".") && peek(1).kind == Token::Kind::Number) {
            SourcePos pos = take().pos;
            const Token& n = take();
            if (!n.integral) throw ParseError("projection index must be an integer", n.pos);
            Term p;
            p.kind = Term::Kind::Proj;
            p.pos = pos;
            p.index = static_cast<std::size_t>(n.number);
            p.kids = {t};
            t = mk(std::move(p));
        }
        return t;
    }

    TermPtr atom() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Number) {
            take();
            Term c;
            c.kind = Term::Kind::Const;
            c.pos = t.pos;
            c.value = t.number;
            return mk(std::move(c));
        }
        if (t.kind == Token::Kind::Ident) {
            if (kPrimitives.count(t.text)) {
                take();
                return eta_prim(t.text, t.pos);
            }
            Term v;
            v.kind = Term::Kind::Var;
            v.pos = t.pos;
            v.name = take().text;
            return mk(std::move(v));
        }
        if (is_sym("(")) {
            SourcePos pos = take().pos;
            std::vector<TermPtr> items{expr()};
            while (is_sym(",")) {
                take();
                items.push_back(expr());
            }
            expect(")");
            if (items.size() == 1) return items[0];
            Term tu;
            tu.kind = Term::Kind::Tuple;
            tu.pos = pos;
            tu.kids = std::move(items);
            return mk(std::move(tu));
        }
        fail("expected an expression");
    }
};

}  // namespace

STypePtr parse_stype(std::string_view text) { return Parser(lex(text)).type_only(); }

TermPtr parse(std::string_view source) { return Parser(lex(source)).program(); }

// ---------------------------------------------------------------- printing

std::string to_string(const Term& t) {
    auto k = [&](std::size_t i) { return to_string(*t.kids[i]); };
    switch (t.kind) {
        case Term::Kind::Var: return t.name;
        case Term::Kind::Const: {
            std::string s = format_real(t.value);
            return t.value < 0 ? "(" + s + ")" : s;
        }
        case Term::Kind::Lam: return "(\\" + t.name + ":" + to_string(*t.param_type) + ". " + k(0) + ")";
        case Term::Kind::App: return "(" + k(0) + " " + k(1) + ")";
        case Term::Kind::Let: return "(let " + t.name + " = " + k(0) + " in " + k(1) + ")";
        case Term::Kind::Prim: {
            if (t.kids.size() == 2 && (t.name == "add" || t.name == "sub" || t.name == "mul")) {
                const char* op = t.name == "add" ? " + " : t.name == "sub" ? " - " : " * ";
                return "(" + k(0) + op + k(1) + ")";
            }
            std::string s = "(" + t.name;
            for (std::size_t i = 0; i < t.kids.size(); ++i) s += " " + k(i);
            return s + ")";
        }
        case Term::Kind::Tuple: {
            std::string s = "(";
            for (std::size_t i = 0; i < t.kids.size(); ++i) s += (i ? ", " : "") + k(i);
            return s + ")";
        }
        case Term::Kind::Proj: return k(0) + "." + std::to_string(t.index);
    }
    return "?";
}

// ---------------------------------------------------------------- checking

namespace {

struct Checker {
    struct Binding {
        std::string name;
        int binder;
        STypePtr type;
    };

    std::vector<Binding> scope;
    std::map<std::string, int> inputs;
    std::vector<std::string> input_order;
    const std::optional<std::vector<std::string>>* vars = nullptr;
    int next_binder = 0;

    [[noreturn]] static void fail(const std::string& msg, SourcePos pos) { throw TypeCheckError(msg, pos); }

    static std::string ty(const STypePtr& t) { return to_string(*t); }

    TermPtr go(const TermPtr& in) {
        Term t = *in;
        switch (t.kind) {
            case Term::Kind::Var: {
                for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                    if (it->name == t.name) {
                        t.binder = it->binder;
                        t.type = it->type;
                        return mk(std::move(t));
                    }
                auto f = inputs.find(t.name);
                if (f == inputs.end()) {
                    if (*vars) fail("unbound variable '" + t.name + "'", t.pos);
                    f = inputs.emplace(t.name, next_binder++).first;
                    input_order.push_back(t.name);
                }
                t.binder = f->second;
                t.type = SType::real();
                return mk(std::move(t));
            }
            case Term::Kind::Const: t.type = SType::real(); return mk(std::move(t));
            case Term::Kind::Lam: {
                t.binder = next_binder++;
                scope.push_back({t.name, t.binder, t.param_type});
                t.kids[0] = go(t.kids[0]);
                scope.pop_back();
                t.type = SType::arrow(t.param_type, t.kids[0]->type);
                return mk(std::move(t));
            }
            case Term::Kind::Let: {
                t.kids[0] = go(t.kids[0]);
                t.binder = next_binder++;
                scope.push_back({t.name, t.binder, t.kids[0]->type});
                t.kids[1] = go(t.kids[1]);
                scope.pop_back();
                t.type = t.kids[1]->type;
                return mk(std::move(t));
            }
            case Term::Kind::App: {
                t.kids[0] = go(t.kids[0]);
                t.kids[1] = go(t.kids[1]);
                const STypePtr& f = t.kids[0]->type;
                if (f->kind != SType::Kind::Arrow)
                    fail("cannot apply a value of type " + ty(f) + " to an argument", t.kids[0]->pos);
                if (!(*f->items[0] == *t.kids[1]->type))
                    fail("argument has type " + ty(t.kids[1]->type) + ", expected " + ty(f->items[0]), t.kids[1]->pos);
                t.type = f->items[1];
                return mk(std::move(t));
            }
            case Term::Kind::Prim: {
                std::size_t arity = (t.name == "add" || t.name == "sub" || t.name == "mul") ? 2 : 1;
                if (t.kids.size() != arity)
                    fail(t.name + " expects " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s") + ", got " +
                             std::to_string(t.kids.size()),
                         t.pos);
                for (auto& k : t.kids) {
                    k = go(k);
                    if (k->type->kind != SType::Kind::Real)
                        fail(t.name + " expects R, got " + ty(k->type), k->pos);
                }
                t.type = SType::real();
                return mk(std::move(t));
            }
            case Term::Kind::Tuple: {
                std::vector<STypePtr> items;
                for (auto& k : t.kids) {
                    k = go(k);
                    items.push_back(k->type);
                }
                t.type = SType::tuple(std::move(items));
                return mk(std::move(t));
            }
            case Term::Kind::Proj: {
                t.kids[0] = go(t.kids[0]);
                const STypePtr& tu = t.kids[0]->type;
                if (tu->kind != SType::Kind::Tuple) fail("projection from non-tuple type " + ty(tu), t.pos);
                if (t.index >= tu->items.size())
                    fail("projection index " + std::to_string(t.index) + " out of range for " + ty(tu), t.pos);
                t.type = tu->items[t.index];
                return mk(std::move(t));
            }
        }
        fail("unknown term", t.pos);
    }
};

}  // namespace

Program check(const TermPtr& term, const std::optional<std::vector<std::string>>& vars) {
    Checker c;
    c.vars = &vars;
    if (vars) {
        for (const auto& v : *vars) {
            if (c.inputs.count(v)) throw TypeCheckError("variable '" + v + "' listed twice", {1, 1});
            c.inputs.emplace(v, c.next_binder++);
            c.input_order.push_back(v);
        }
    }
    Program p;
    p.term = c.go(term);
    p.type = p.term->type;
    p.inputs = c.input_order;
    for (const auto& n : p.inputs) p.input_binders.push_back(c.inputs.at(n));
    return p;
}

STypePtr typecheck(const TermPtr& term, const std::vector<std::string>& env) { return check(term, env).type; }

// ---------------------------------------------------------------- elaboration

namespace {

std::set<int> free_vars(const Term& t) {
    std::set<int> out;
    switch (t.kind) {
        case Term::Kind::Var: out.insert(t.binder); break;
        case Term::Kind::Lam:
            out = free_vars(*t.kids[0]);
            out.erase(t.binder);
            break;
        case Term::Kind::Let: {
            out = free_vars(*t.kids[0]);
            auto body = free_vars(*t.kids[1]);
            body.erase(t.binder);
            out.insert(body.begin(), body.end());
            break;
        }
        default:
            for (const auto& k : t.kids) {
                auto f = free_vars(*k);
                out.insert(f.begin(), f.end());
            }
    }
    return out;
}

/// Occurrences of `b` at the current level; a lambda mentioning it counts once.
std::size_t uses(const Term& t, int b) {
    switch (t.kind) {
        case Term::Kind::Var: return t.binder == b ? 1 : 0;
        case Term::Kind::Lam: return free_vars(t).count(b) ? 1 : 0;
        default: {
            std::size_t n = 0;
            for (const auto& k : t.kids) n += uses(*k, b);
            return n;
        }
    }
}

using Env = std::map<int, std::deque<std::vector<VertexId>>>;

void provide(NetBuilder& b, Env& env, int binder, const std::vector<VertexId>& ws, std::size_t n) {
    auto& groups = env[binder];
    groups.clear();
    if (n == 0) {
        for (auto w : ws) b.discard(w);
        return;
    }
    std::vector<std::vector<VertexId>> copies(n);
    for (auto w : ws) {
        VertexId rest = w;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            auto [a, r] = b.copy(rest);
            copies[k].push_back(a);
            rest = r;
        }
        copies[n - 1].push_back(rest);
    }
    for (auto& g : copies) groups.push_back(std::move(g));
}

std::vector<VertexId> take(Env& env, int binder) {
    auto& g = env.at(binder);
    if (g.empty()) throw Error("elaborate: variable supply exhausted");
    auto out = g.front();
    g.pop_front();
    return out;
}

std::vector<VertexId> elab(const Term& t, NetBuilder& b, Env& env) {
    switch (t.kind) {
        case Term::Kind::Var: return take(env, t.binder);
        case Term::Kind::Const: return {b.constant(t.value)};
        case Term::Kind::Prim: {
            std::vector<VertexId> args;
            for (const auto& k : t.kids) args.push_back(elab(*k, b, env)[0]);
            return {b.op1(t.name, args)};
        }
        case Term::Kind::Tuple: {
            std::vector<VertexId> out;
            for (const auto& k : t.kids) {
                auto w = elab(*k, b, env);
                out.insert(out.end(), w.begin(), w.end());
            }
            return out;
        }
        case Term::Kind::Proj: {
            auto w = elab(*t.kids[0], b, env);
            const auto& items = t.kids[0]->type->items;
            std::vector<VertexId> out;
            std::size_t off = 0;
            for (std::size_t i = 0; i < items.size(); ++i) {
                std::size_t n = wires(*items[i]).size();
                for (std::size_t k = off; k < off + n; ++k) {
                    if (i == t.index)
                        out.push_back(w[k]);
                    else
                        b.discard(w[k]);
                }
                off += n;
            }
            return out;
        }
        case Term::Kind::App: {
            auto f = elab(*t.kids[0], b, env);
            auto a = elab(*t.kids[1], b, env);
            return b.eval(f[0], a);
        }
        case Term::Kind::Let: {
            auto u = elab(*t.kids[0], b, env);
            provide(b, env, t.binder, u, uses(*t.kids[1], t.binder));
            return elab(*t.kids[1], b, env);
        }
        case Term::Kind::Lam: {
            auto caps = free_vars(t);
            std::vector<int> order(caps.begin(), caps.end());
            std::vector<VertexId> sources;
            std::vector<std::size_t> widths;
            for (int c : order) {
                auto g = take(env, c);
                widths.push_back(g.size());
                sources.insert(sources.end(), g.begin(), g.end());
            }
            const Term& body = *t.kids[0];
            VertexId fn = b.box(sources, wires(*t.param_type), [&](NetBuilder& in, std::span<const VertexId> iw) {
                Env inner;
                std::size_t off = 0;
                for (std::size_t i = 0; i < order.size(); ++i) {
                    std::vector<VertexId> g(iw.begin() + static_cast<std::ptrdiff_t>(off),
                                            iw.begin() + static_cast<std::ptrdiff_t>(off + widths[i]));
                    provide(in, inner, order[i], g, uses(body, order[i]));
                    off += widths[i];
                }
                std::vector<VertexId> param(iw.begin() + static_cast<std::ptrdiff_t>(off), iw.end());
                provide(in, inner, t.binder, param, uses(body, t.binder));
                return elab(body, in, inner);
            });
            return {fn};
        }
    }
    throw Error("elaborate: unknown term");
}

}  // namespace

Hypernet elaborate(const Program& program) {
    Hypernet h;
    NetBuilder b(h);
    Env env;
    for (int binder : program.input_binders) {
        VertexId w = b.input(Type::real());
        provide(b, env, binder, {w}, uses(*program.term, binder));
    }
    b.outputs(elab(*program.term, b, env));
    return h;
}

Hypernet compile(std::string_view source, const std::optional<std::vector<std::string>>& vars) {
    return elaborate(check(parse(source), vars));
}

}  // namespace hyperad::lambda
