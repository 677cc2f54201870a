#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperad/ad.hpp"
#include "hyperad/hypernet.hpp"
#include "hyperad/rules.hpp"

namespace hyperad {

class EvalError : public Error {
public:
    using Error::Error;
};

/// The finite-difference oracle produced a non-finite value.
class OracleError : public Error {
public:
    using Error::Error;
};

/// A first-order net normalized with the evaluation rules and flattened into
/// an evaluation schedule. Cheap to call repeatedly.
class CompiledNet {
public:
    /// Throws TypeError unless the interface is all reals; FuelExhausted if
    /// normalization does not finish; EvalError if a box or eval survives.
    explicit CompiledNet(const Hypernet& h, std::size_t fuel = 1'000'000);

    std::vector<double> operator()(const std::vector<double>& x) const;

    const Hypernet& normalized() const { return net_; }
    std::size_t steps() const { return steps_; }
    std::size_t arity() const { return arity_; }
    std::size_t coarity() const { return coarity_; }

private:
    struct Step {
        Label label;
        std::vector<std::size_t> in;
        std::vector<std::size_t> out;
        TypeList out_types;
    };
    Hypernet net_;
    std::size_t steps_ = 0;
    std::size_t arity_ = 0;
    std::size_t coarity_ = 0;
    std::size_t slots_ = 0;
    std::vector<std::size_t> inputs_;
    std::vector<std::size_t> outputs_;
    std::vector<Step> schedule_;
};

std::vector<double> eval_numeric(const Hypernet& h, const std::vector<double>& x, std::size_t fuel = 1'000'000);

/// `x ++ dy |-> dx`: the adjoint's backpropagator applied to `dy`.
Hypernet gradient_net(const Hypernet& h, const PullbackRegistry& reg = PullbackRegistry::builtin());

/// Reverse-mode derivatives of a first-order net.
class Differentiator {
public:
    explicit Differentiator(const Hypernet& h, const PullbackRegistry& reg = PullbackRegistry::builtin(),
                            std::size_t fuel = 1'000'000);

    std::vector<double> value(const std::vector<double>& x) const { return primal_(x); }
    /// Vector-Jacobian product.
    std::vector<double> vjp(const std::vector<double>& x, const std::vector<double>& dy) const;
    /// Rows are outputs.
    std::vector<std::vector<double>> jacobian(const std::vector<double>& x) const;
    std::size_t arity() const { return primal_.arity(); }
    std::size_t coarity() const { return primal_.coarity(); }
    const CompiledNet& backward() const { return backward_; }

private:
    CompiledNet primal_;
    CompiledNet backward_;
};

/// Gradient of a net with exactly one real output. Throws EvalError otherwise
/// (use `jacobian` for several outputs).
std::vector<double> gradient(const Hypernet& h, const std::vector<double>& x);
std::vector<std::vector<double>> jacobian(const Hypernet& h, const std::vector<double>& x);

/// Central differences with step 1e-6 * max(1, |x_i|). Throws OracleError on
/// non-finite values.
std::vector<std::vector<double>> finite_diff(const CompiledNet& f, const std::vector<double>& x);

struct GradPoint {
    std::vector<double> x;
    std::vector<std::vector<double>> ad;
    std::vector<std::vector<double>> fd;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    bool pass = true;
};

/// AD against finite differences. An entry passes when its absolute error is
/// at most `abs_floor` or its relative error at most `rel_tol`.
struct GradReport {
    std::string name;
    std::vector<GradPoint> points;
    double rel_tol = 1e-4;
    double abs_floor = 1e-7;

    bool pass() const;
    std::string text() const;
    nlohmann::json json() const;
};

GradReport compare_with_finite_differences(const Hypernet& h, const std::vector<std::vector<double>>& points,
                                           const std::string& name = "", double rel_tol = 1e-4,
                                           double abs_floor = 1e-7);

struct AxiomResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    std::string first_failure;

    bool pass() const { return checks > 0 && failures == 0; }
};

/// Numeric checks of the reverse-derivative axioms RD.1 to RD.5 on a pool of
/// elaborated programs, `points` seeded points per axiom.
std::vector<AxiomResult> check_rd_axioms(std::uint64_t seed, std::size_t points = 100, double rel_tol = 1e-6);

}  // namespace hyperad
