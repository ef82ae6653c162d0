#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rllfb {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    /// Directory holding capacity_d{1,2,3}.csv; empty skips the golden comparison.
    std::string golden_dir;
    /// Only run these criteria (1-based ids); empty runs all.
    std::vector<int> only;
};

/// The end-to-end acceptance checks, in id order. Each criterion is run once and reported;
/// `on_result` (if set) is called as soon as a criterion finishes.
std::vector<CriterionResult> run_verification(const VerifyOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  name  (1.2 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace rllfb
