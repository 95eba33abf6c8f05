// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//   acceptance [--only ID ...] [--json]

#include <cstring>
#include <iostream>
#include <string>

#include "rectfree/acceptance.hpp"

int main(int argc, char** argv)
{
    rectfree::AcceptanceConfig cfg;
    cfg.mc = rectfree::mc_options_from_env();
    bool json = false;
    bool collecting = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--json") == 0) {
            json = true;
            collecting = false;
        } else if (std::strcmp(argv[i], "--only") == 0) {
            collecting = true;
        } else if (collecting) {
            cfg.only.emplace_back(argv[i]);
        } else {
            std::cerr << "usage: acceptance [--only ID ...] [--json]\n";
            return 2;
        }
    }

    const auto results = rectfree::run_acceptance(cfg);
    std::cout << rectfree::format_report(results);
    if (json)
        std::cout << rectfree::report_json(results) << '\n';
    bool ok = !results.empty();
    for (const auto& r : results)
        ok = ok && r.passed;
    return ok ? 0 : 1;
}
