#include "hyperad/random_nets.hpp"

#include <algorithm>
#include <functional>

#include "hyperad/validate.hpp"

namespace hyperad {

namespace {

using Rng = std::mt19937_64;

std::size_t below(Rng& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }
bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

const std::vector<std::string> kUnary{"sin", "cos", "exp", "neg"};
const std::vector<std::string> kBinary{"add", "sub", "mul"};

bool callable(const Type& t) {
    if (!t.is_arrow()) return false;
    for (const auto& o : t.operands())
        if (!o.is_real()) return false;
    return true;
}

class NetGen {
public:
    NetGen(Rng& rng, const RandomNetOptions& opt) : rng_(rng), opt_(opt) {}

    Hypernet run() {
        Hypernet net;
        NetBuilder b(net);
        TypeList ins;
        if (opt_.inputs) {
            ins = *opt_.inputs;
        } else {
            std::size_t n = opt_.min_inputs + below(rng_, opt_.max_inputs - opt_.min_inputs + 1);
            for (std::size_t i = 0; i < n; ++i)
                ins.push_back(!opt_.first_order && coin(rng_, 0.25) ? Type::arrow({Type::real()}, {Type::real()})
                                                                    : Type::real());
        }
        std::vector<VertexId> pool = b.inputs(ins);
        std::size_t budget = opt_.max_edges;
        grow(b, pool, budget, 0);
        if (opt_.first_order) {
            close_arrows(b, pool, budget);
        }
        std::shuffle(pool.begin(), pool.end(), rng_);
        b.outputs(pool);
        return net;
    }

private:
    std::size_t arrows(const Hypernet& h, const std::vector<VertexId>& pool) const {
        std::size_t n = 0;
        for (auto v : pool)
            if (h.vertex(v).type.is_arrow()) ++n;
        return n;
    }

    std::vector<std::size_t> reals(const Hypernet& h, const std::vector<VertexId>& pool) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (h.vertex(pool[i]).type.is_real()) out.push_back(i);
        return out;
    }

    VertexId take(std::vector<VertexId>& pool, std::size_t i) {
        VertexId v = pool[i];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
        return v;
    }

    /// Takes `n` distinct real wires from the pool.
    std::vector<VertexId> take_reals(const Hypernet& h, std::vector<VertexId>& pool, std::size_t n) {
        std::vector<VertexId> out;
        for (std::size_t k = 0; k < n; ++k) {
            auto rs = reals(h, pool);
            out.push_back(take(pool, rs[below(rng_, rs.size())]));
        }
        return out;
    }

    void grow(NetBuilder& b, std::vector<VertexId>& pool, std::size_t& budget, std::size_t depth) {
        Hypernet& h = b.net();
        for (;;) {
            std::size_t reserve = arrows(h, pool);
            if (budget <= reserve || coin(rng_, 0.12)) return;
            const std::size_t spare = budget - reserve;
            const std::size_t nreal = reals(h, pool).size();
            std::vector<int> moves;
            auto want = [&](int m, int weight) {
                for (int i = 0; i < weight; ++i) moves.push_back(m);
            };
            if (nreal >= 1) want(0, 3);
            if (nreal >= 2) want(1, 4);
            want(2, nreal == 0 ? 3 : 1);
            if (!pool.empty()) want(3, 2);
            if (!pool.empty()) want(4, 1);
            if (depth < opt_.max_depth && spare >= 2) want(5, 3);
            for (auto v : pool)
                if (callable(h.vertex(v).type) && h.vertex(v).type.operands().size() <= nreal) {
                    want(6, 4);
                    break;
                }
            switch (moves[below(rng_, moves.size())]) {
                case 0: pool.push_back(b.op1(kUnary[below(rng_, kUnary.size())], take_reals(h, pool, 1))); break;
                case 1: pool.push_back(b.op1(kBinary[below(rng_, kBinary.size())], take_reals(h, pool, 2))); break;
                case 2: {
                    static const double kConsts[] = {0.5, 2.0, -1.5, 3.0, 0.25};
                    pool.push_back(b.constant(kConsts[below(rng_, 5)]));
                    break;
                }
                case 3: {
                    auto [x, y] = b.copy(take(pool, below(rng_, pool.size())));
                    pool.push_back(x);
                    pool.push_back(y);
                    break;
                }
                case 4: {
                    // Discarding an arrow frees its reserved slot, so this is always affordable.
                    b.discard(take(pool, below(rng_, pool.size())));
                    break;
                }
                case 5: {
                    std::size_t inner = below(rng_, spare - 1);
                    std::vector<VertexId> captured;
                    std::size_t ncap = below(rng_, std::min<std::size_t>(pool.size(), 2) + 1);
                    std::size_t cap_arrows = 0;
                    for (std::size_t k = 0; k < ncap; ++k) {
                        std::size_t i = below(rng_, pool.size());
                        if (h.vertex(pool[i]).type.is_arrow()) {
                            if (cap_arrows + 1 > inner) continue;
                            ++cap_arrows;
                        }
                        captured.push_back(take(pool, i));
                    }
                    budget -= 1 + inner;
                    TypeList bound(1 + below(rng_, 2), Type::real());
                    pool.push_back(b.box(captured, bound, [&](NetBuilder& ib, std::span<const VertexId> w) {
                        std::vector<VertexId> ipool(w.begin(), w.end());
                        grow(ib, ipool, inner, depth + 1);
                        close_arrows(ib, ipool, inner);
                        budget += inner;
                        std::shuffle(ipool.begin(), ipool.end(), rng_);
                        return ipool;
                    }));
                    continue;
                }
                case 6: {
                    std::vector<std::size_t> fns;
                    for (std::size_t i = 0; i < pool.size(); ++i)
                        if (callable(h.vertex(pool[i]).type) && h.vertex(pool[i]).type.operands().size() <= nreal)
                            fns.push_back(i);
                    VertexId fn = take(pool, fns[below(rng_, fns.size())]);
                    auto args = take_reals(h, pool, h.vertex(fn).type.operands().size());
                    for (auto r : b.eval(fn, args)) pool.push_back(r);
                    break;
                }
            }
            --budget;
        }
    }

    /// Discards every arrow left in the pool; `budget` always covers them.
    void close_arrows(NetBuilder& b, std::vector<VertexId>& pool, std::size_t& budget) {
        std::vector<VertexId> keep;
        for (auto v : pool) {
            if (b.net().vertex(v).type.is_arrow()) {
                b.discard(v);
                --budget;
            } else {
                keep.push_back(v);
            }
        }
        pool = std::move(keep);
    }

    Rng& rng_;
    const RandomNetOptions& opt_;
};

}  // namespace

Hypernet random_net(std::mt19937_64& rng, const RandomNetOptions& options) {
    for (;;) {
        Hypernet h = NetGen(rng, options).run();
        if (options.require_output && h.outputs().empty()) continue;
        require_well_typed(h, "random_net");
        return h;
    }
}

// ---------------------------------------------------------------- terms

namespace {

using T = StringTerm;

TypeList slice(const TypeList& ts, std::size_t a, std::size_t b) {
    return TypeList(ts.begin() + static_cast<std::ptrdiff_t>(a), ts.begin() + static_cast<std::ptrdiff_t>(b));
}

TypeList cat(TypeList a, const TypeList& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

class TermGen {
public:
    TermGen(Rng& rng, const RandomTermOptions& opt) : rng_(rng), opt_(opt) {}

    TermPtr gen(const TypeList& dom, std::size_t size, std::size_t abs_depth) {
        if (size == 0) return T::id(dom);
        std::vector<int> moves{0, 0, 1, 1};
        if (dom.size() >= 2) moves.insert(moves.end(), {2, 2, 3});
        if (!dom.empty()) moves.insert(moves.end(), {4, 4, 4});
        if (abs_depth < opt_.max_abs_depth && size >= 3) moves.push_back(5);
        switch (moves[below(rng_, moves.size())]) {
            case 0: {
                TermPtr f = gen(dom, size / 2, abs_depth);
                return T::seq(f, gen(f->cod(), size - 1 - size / 2, abs_depth));
            }
            case 1: {
                std::size_t k = below(rng_, dom.size() + 1);
                std::size_t left = below(rng_, size);
                return T::par(gen(slice(dom, 0, k), left, abs_depth), gen(slice(dom, k, dom.size()), size - 1 - left, abs_depth));
            }
            case 2: {
                std::size_t k = 1 + below(rng_, dom.size() - 1);
                return T::swap(slice(dom, 0, k), slice(dom, k, dom.size()));
            }
            case 3: {
                std::size_t k = below(rng_, dom.size() - 1);
                return T::par(T::par(T::id(slice(dom, 0, k)), atom2(dom[k], dom[k + 1])), T::id(slice(dom, k + 2, dom.size())));
            }
            case 4: {
                std::size_t k = below(rng_, dom.size());
                return T::par(T::par(T::id(slice(dom, 0, k)), atom1(dom[k])), T::id(slice(dom, k + 1, dom.size())));
            }
            case 5: {
                // Close over the whole domain, then apply to a constant.
                TermPtr body = gen(cat(dom, {Type::real()}), size - 2, abs_depth + 1);
                TermPtr fn = T::abs(body, 1);
                Type arrow = fn->cod()[0];
                TermPtr arg = T::atom(Label::constant(1.5), {}, {Type::real()});
                return T::seq(T::par(fn, arg), T::atom(Label::eval(), {arrow, Type::real()}, arrow.results()));
            }
        }
        return T::id(dom);
    }

private:
    TermPtr atom1(const Type& t) {
        int pick = static_cast<int>(below(rng_, t.is_real() ? 4 : 2));
        if (pick == 0) return T::atom(Label::copy(), {t}, {t, t});
        if (pick == 1) return T::atom(Label::discard(), {t}, {});
        return T::atom(Label::op(kUnary[below(rng_, kUnary.size())]), {t}, {t});
    }

    TermPtr atom2(const Type& a, const Type& b) {
        if (a.is_real() && b.is_real())
            return T::atom(Label::op(kBinary[below(rng_, kBinary.size())]), {a, b}, {Type::real()});
        if (callable(a) && a.operands().size() == 1 && b.is_real())
            return T::atom(Label::eval(), {a, b}, a.results());
        return T::swap({a}, {b});
    }

    Rng& rng_;
    const RandomTermOptions& opt_;
};

bool is_id(const TermPtr& t) { return t->kind == T::Kind::Id; }

/// One law at the root of `t`, or nullptr when the chosen law does not fit.
TermPtr law(Rng& rng, const TermPtr& t, int which) {
    switch (which) {
        case 0:  // associativity of ;
            if (t->kind == T::Kind::Seq && t->right->kind == T::Kind::Seq)
                return T::seq(T::seq(t->left, t->right->left), t->right->right);
            if (t->kind == T::Kind::Seq && t->left->kind == T::Kind::Seq)
                return T::seq(t->left->left, T::seq(t->left->right, t->right));
            return nullptr;
        case 1:  // associativity of tensor
            if (t->kind == T::Kind::Par && t->right->kind == T::Kind::Par)
                return T::par(T::par(t->left, t->right->left), t->right->right);
            if (t->kind == T::Kind::Par && t->left->kind == T::Kind::Par)
                return T::par(t->left->left, T::par(t->left->right, t->right));
            return nullptr;
        case 2:  // identities for ;
            if (t->kind == T::Kind::Seq && is_id(t->left)) return t->right;
            if (t->kind == T::Kind::Seq && is_id(t->right)) return t->left;
            return coin(rng, 0.5) ? T::seq(T::id(t->dom()), t) : T::seq(t, T::id(t->cod()));
        case 3:  // unit of tensor, and id ⊗ id = id
            if (t->kind == T::Kind::Par && is_id(t->left) && is_id(t->right))
                return T::id(t->dom());
            if (t->kind == T::Kind::Par && is_id(t->left) && t->left->dom().empty()) return t->right;
            if (t->kind == T::Kind::Id && t->operands.size() >= 2) {
                std::size_t k = 1 + below(rng, t->operands.size() - 1);
                return T::par(T::id(slice(t->operands, 0, k)), T::id(slice(t->operands, k, t->operands.size())));
            }
            return coin(rng, 0.5) ? T::par(T::id({}), t) : T::par(t, T::id({}));
        case 4:  // interchange
            if (t->kind == T::Kind::Seq && t->left->kind == T::Kind::Par && t->right->kind == T::Kind::Par &&
                t->left->left->cod() == t->right->left->dom())
                return T::par(T::seq(t->left->left, t->right->left), T::seq(t->left->right, t->right->right));
            if (t->kind == T::Kind::Par && t->left->kind == T::Kind::Seq && t->right->kind == T::Kind::Seq)
                return T::seq(T::par(t->left->left, t->right->left), T::par(t->left->right, t->right->right));
            if (t->kind == T::Kind::Par)  // f ⊗ g = (f ⊗ id) ; (id ⊗ g)
                return T::seq(T::par(t->left, T::id(t->right->dom())), T::par(T::id(t->left->cod()), t->right));
            return nullptr;
        case 5:  // naturality of the symmetry
            if (t->kind == T::Kind::Par)
                return T::seq(T::swap(t->left->dom(), t->right->dom()),
                              T::seq(T::par(t->right, t->left), T::swap(t->right->cod(), t->left->cod())));
            return nullptr;
        case 6: {  // involution, inserted after t
            TypeList c = t->cod();
            if (c.size() < 2) return nullptr;
            std::size_t k = 1 + below(rng, c.size() - 1);
            TypeList a = slice(c, 0, k), b = slice(c, k, c.size());
            return T::seq(t, T::seq(T::swap(a, b), T::swap(b, a)));
        }
        case 7:  // swap with an empty block, hexagon
            if (t->kind == T::Kind::Swap && (t->operands.empty() || t->results.empty())) return T::id(t->dom());
            if (t->kind == T::Kind::Swap && t->results.size() >= 2) {
                std::size_t k = 1 + below(rng, t->results.size() - 1);
                TypeList a = t->operands, b = slice(t->results, 0, k), c = slice(t->results, k, t->results.size());
                return T::seq(T::par(T::swap(a, b), T::id(c)), T::par(T::id(b), T::swap(a, c)));
            }
            if (t->kind == T::Kind::Swap && t->operands.size() >= 2) {
                std::size_t k = 1 + below(rng, t->operands.size() - 1);
                TypeList a = slice(t->operands, 0, k), b = slice(t->operands, k, t->operands.size()), c = t->results;
                return T::seq(T::par(T::id(a), T::swap(b, c)), T::par(T::swap(a, c), T::id(b)));
            }
            return nullptr;
    }
    return nullptr;
}

std::size_t count_nodes(const TermPtr& t) {
    std::size_t n = 1;
    if (t->left) n += count_nodes(t->left);
    if (t->right) n += count_nodes(t->right);
    return n;
}

TermPtr rebuild(const TermPtr& t, TermPtr left, TermPtr right) {
    switch (t->kind) {
        case T::Kind::Seq: return T::seq(std::move(left), std::move(right));
        case T::Kind::Par: return T::par(std::move(left), std::move(right));
        case T::Kind::Abs: return T::abs(std::move(left), t->bound);
        default: return t;
    }
}

/// Applies a law at the preorder node `target`; `counter` tracks the walk.
TermPtr rewrite_at(Rng& rng, const TermPtr& t, std::size_t target, std::size_t& counter) {
    if (counter++ == target) {
        std::vector<int> laws{0, 1, 2, 3, 4, 5, 6, 7};
        std::shuffle(laws.begin(), laws.end(), rng);
        for (int l : laws)
            if (auto r = law(rng, t, l)) return r;
        return t;
    }
    if (!t->left) return t;
    TermPtr l = rewrite_at(rng, t->left, target, counter);
    TermPtr r = t->right ? rewrite_at(rng, t->right, target, counter) : nullptr;
    return rebuild(t, l, r);
}

}  // namespace

TermPtr random_term(std::mt19937_64& rng, const TypeList& dom, const RandomTermOptions& options) {
    TermGen g(rng, options);
    return g.gen(dom, options.size, 0);
}

TermPtr smc_shuffle(std::mt19937_64& rng, const TermPtr& t, std::size_t steps) {
    TermPtr cur = t;
    for (std::size_t s = 0; s < steps; ++s) {
        std::size_t counter = 0;
        cur = rewrite_at(rng, cur, below(rng, count_nodes(cur)), counter);
    }
    return cur;
}

}  // namespace hyperad
