// Runs every property suite and prints one verdict per acceptance criterion.
#include <cstdio>
#include <iostream>
#include <map>

#include "hpn/checks.hpp"

int main() {
    using namespace hpn::checks;
    CheckOptions opt;
    opt.lmax = 2;
    const Report r = run(Scope::All, opt);
    write_text(std::cout, r);
    std::map<int, CriterionSummary> by;
    for (const auto& s : summarize(r)) by[s.criterion] = s;
    bool ok = true;
    std::cout << "\n";
    for (int c = 1; c <= 8; ++c) {
        const auto it = by.find(c);
        const bool pass = it != by.end() && it->second.checks > 0 && it->second.pass;
        ok = ok && pass;
        char line[160];
        if (it == by.end())
            std::snprintf(line, sizeof line, "criterion %d: FAIL (no checks ran)", c);
        else
            std::snprintf(line, sizeof line, "criterion %d: %s (%d checks, %d failed, worst/tol %.3g)", c,
                          pass ? "PASS" : "FAIL", it->second.checks, it->second.failed, it->second.worst_ratio);
        std::cout << line << "\n";
    }
    std::cout << (ok ? "acceptance: PASS" : "acceptance: FAIL") << std::endl;
    return ok ? 0 : 1;
}
