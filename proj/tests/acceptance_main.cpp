// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "hetnet/acceptance.hpp"

int main(int argc, char** argv)
{
    hetnet::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i)
    {
        opts.only.push_back(std::atoi(argv[i]));
    }
    const auto results = hetnet::run_acceptance(opts, std::cout);
    const auto failed = std::count_if(results.begin(), results.end(),
                                      [](const hetnet::CriterionResult& r) { return !r.passed; });
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
