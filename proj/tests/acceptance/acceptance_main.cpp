#include "mallows/acceptance.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>

// Usage: acceptance [--quick] [ids...]
int main(int argc, char** argv) {
    mallows::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0)
            opt.quick = true;
        else
            opt.only.push_back(std::atoi(argv[i]));
    }
    opt.on_result = [](const mallows::CriterionResult& r) {
        std::cout << mallows::format_result_line(r) << std::endl;
    };
    auto results = mallows::run_acceptance(opt);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
