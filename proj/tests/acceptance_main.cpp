// Acceptance gate: one pass/fail line per criterion, the deterministic
// evidence table indented under it, and a summary line.  Exit 0 only when
// every criterion passes.  An optional argument filters by substring.

#include <cstdio>
#include <string>

#include "hdistlab/acceptance.hpp"

int main(int argc, char** argv) {
    std::string filter;
    if (argc > 1) filter = argv[1];

    const hdistlab::AcceptanceSummary sum = hdistlab::verify(filter);
    int npass = 0;
    for (const auto& r : sum.results) {
        std::printf("[%s] %s (%.0f ms)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.ms);
        std::string line;
        for (char c : r.table) {
            if (c == '\n') {
                std::printf("    %s\n", line.c_str());
                line.clear();
            } else {
                line += c;
            }
        }
        if (r.pass) ++npass;
    }
    std::printf("acceptance: %d/%zu criteria passed\n", npass, sum.results.size());
    return sum.all_pass ? 0 : 1;
}
