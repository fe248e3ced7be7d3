#ifndef SQLO_EVALUATE_HPP
#define SQLO_EVALUATE_HPP

#include <optional>
#include <vector>

#include "sqlo/fock.hpp"
#include "sqlo/operators.hpp"

namespace sqlo
{
/// Product state over a mode grid: one prepared single-mode state per mode.
class ProductState
{
public:
    /// Realizes every spec, at `cutoff` when given, else at each mode's
    /// default cutoff.
    ProductState(std::vector<SingleModeSpec> specs, std::optional<int> cutoff = std::nullopt);

    /// LO in `lo`, every other mode vacuum.
    static ProductState target_absent(const ModeGrid& grid, const SingleModeSpec& lo,
                                      std::optional<int> cutoff = std::nullopt);

    /// As target_absent plus a coherent |beta> in the target mode.
    static ProductState target_present(const ModeGrid& grid, const SingleModeSpec& lo, Complex beta,
                                       std::optional<int> cutoff = std::nullopt);

    std::size_t mode_count() const noexcept { return modes_.size(); }
    const std::vector<SingleModeSpec>& specs() const noexcept { return specs_; }
    const FockVector& mode(std::size_t i) const { return modes_.at(i); }

private:
    std::vector<SingleModeSpec> specs_;
    std::vector<FockVector> modes_;
};

/// <psi| op |psi> by factorization: each monomial splits into per-mode
/// ladder strings (order preserved within a mode) whose single-mode
/// expectations multiply. Throws InvalidArgument on a mode-count mismatch or
/// a monomial of degree > 4.
Complex expectation(const ProductState& state, const OperatorSum& op);

/// <op^2> - <op>^2 for Hermitian `op`. Throws InvalidArgument if `op` is not
/// Hermitian or the result carries an imaginary part above 1e-10 relative.
double variance(const ProductState& state, const OperatorSum& op);

struct BruteForceLimits
{
    int max_modes = 3;
    int max_cutoff = 30;
};

/// Independent oracle for expectation(): materializes the full
/// tensor-product amplitude table keyed by occupation tuples and applies
/// each monomial factor by factor. Throws ResourceBound beyond `limits`.
Complex brute_force_expectation(const ProductState& state, const OperatorSum& op, BruteForceLimits limits = {});

}  // namespace sqlo

#endif  // SQLO_EVALUATE_HPP
