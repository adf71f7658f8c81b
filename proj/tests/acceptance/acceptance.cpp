#include <cstdio>
#include <string>
#include <vector>

#include "cbs/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> ids;
    for (int i = 1; i < argc; ++i) ids.emplace_back(argv[i]);
    if (ids.empty()) ids = cbs::acceptance_ids();
    bool ok = true;
    cbs::run_acceptance(ids, cbs::AcceptanceOptions{}, [&](const cbs::CriterionResult& r) {
        std::printf("%s\n", cbs::format_result_line(r).c_str());
        std::fflush(stdout);
        ok = ok && r.passed;
    });
    return ok ? 0 : 1;
}
