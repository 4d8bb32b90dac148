#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace hetnet
{

struct AcceptanceOptions
{
    std::uint64_t seed = 20170801;
    std::size_t drops = 20000;     //!< Monte Carlo drops for criteria 2, 5, 7, 8
    std::size_t ks_drops = 100000;  //!< drops for the pathloss KS check
    std::vector<int> only;          //!< criterion ids to run; empty runs all
};

struct CriterionResult
{
    int id = 0;
    std::string name;
    bool passed = false;
    bool flagged = false;  //!< passed inside the slack band
    std::string detail;
    double seconds = 0.0;
};

/*!
 * Run the acceptance criteria, printing one PASS/FAIL line per criterion
 * as it completes. Runtime limits are part of each criterion.
 */
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log);

}  // namespace hetnet
