#ifndef SQLO_VERIFICATION_HPP
#define SQLO_VERIFICATION_HPP

#include <string>
#include <vector>

namespace sqlo
{
struct CheckResult
{
    std::string name;
    bool pass = false;
    /// Largest deviation seen by the check, in the check's own units.
    double max_deviation = 0.0;
};

/// Cross-checks closed-form results against the truncated-basis engine and
/// the brute-force oracle. Deterministic: fixed grids and a fixed seed.
std::vector<CheckResult> run_verification();

}  // namespace sqlo

#endif  // SQLO_VERIFICATION_HPP
