// Acceptance-criteria runner. With --criterion N it executes one criterion
// and exits nonzero if it fails; with no arguments it runs all nine.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "lp4/acceptance.hpp"

int main(int argc, char** argv) {
    int criterion = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            criterion = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (criterion != 0 && (criterion < 1 || criterion > 9)) {
        std::fprintf(stderr, "criterion must be in 1..9\n");
        return 2;
    }

    std::vector<lp4::CriterionResult> results;
    if (criterion == 0) {
        results = lp4::run_acceptance();
    } else {
        results.push_back(lp4::run_criterion(criterion));
    }
    const std::string report = lp4::acceptance_report(results);
    std::fputs(report.c_str(), stdout);
    for (const auto& r : results)
        if (!r.passed) return 1;
    return 0;
}
