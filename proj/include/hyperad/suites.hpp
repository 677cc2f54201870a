#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hyperad {

/// A named surface program with the inputs it is differentiated in.
struct CorpusProgram {
    std::string name;
    std::string source;
    std::vector<std::string> vars;
};

/// Programs exercising closures, nested lambdas, repeated application and
/// unused bindings.
const std::vector<CorpusProgram>& gradient_corpus();

struct CheckResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::size_t cases = 0;
    std::string detail;
    double seconds = 0.0;
};

struct CheckOptions {
    std::uint64_t seed = 1;
};

CheckResult check_worked_example(const CheckOptions& opt = {});
CheckResult check_corpus(const CheckOptions& opt = {});
CheckResult check_diamond(const CheckOptions& opt = {});
CheckResult check_beta(const CheckOptions& opt = {});
CheckResult check_chain_rule(const CheckOptions& opt = {});
CheckResult check_definability(const CheckOptions& opt = {});
CheckResult check_dpo_example(const CheckOptions& opt = {});
CheckResult check_substitution(const CheckOptions& opt = {});
CheckResult check_rd(const CheckOptions& opt = {});
CheckResult check_smc(const CheckOptions& opt = {});

/// Suite names: oracle, rd, dpo, diamond, beta, chain, definability, smc, all.
const std::vector<std::string>& suite_names();

/// Runs a named suite; throws std::invalid_argument on an unknown name.
std::vector<CheckResult> run_suite(const std::string& name, const CheckOptions& opt = {});

}  // namespace hyperad
