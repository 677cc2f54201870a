// Acceptance checks: one PASS/FAIL line per criterion.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "hyperad/suites.hpp"

int main(int argc, char** argv) {
    hyperad::CheckOptions opt;
    if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
    int failed = 0;
    for (const auto& r : hyperad::run_suite("all", opt)) {
        std::printf("%s %-4s %s (%.2fs): %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.title.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%d of 10 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
