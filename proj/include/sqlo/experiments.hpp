#ifndef SQLO_EXPERIMENTS_HPP
#define SQLO_EXPERIMENTS_HPP

#include <optional>
#include <span>
#include <vector>

#include "sqlo/analytic.hpp"
#include "sqlo/operators.hpp"

namespace sqlo
{
enum class SweepParameter
{
    R,
    ThetaXi,
    /// theta_T - theta_LO + theta_H, realized by moving theta_H.
    ThetaOffset,
    AlphaMag,
    /// Integration time in heterodyne periods (kernel study only).
    Tau
};

enum class Normalization
{
    /// |alpha| stays at its baseline value while r moves.
    FixedAlpha,
    /// |alpha| is re-solved so that |alpha|^2 + sinh^2 r keeps its baseline value.
    FixedNbarLO
};

enum class OracleMode
{
    /// Brute-force tensor-product cross-check at first, middle, last row.
    SpotCheck,
    Full
};

struct SweepSpec
{
    SweepParameter parameter = SweepParameter::R;
    std::vector<double> values;
    RadarParams held;
    ModeGrid grid = ModeGrid::heterodyne(100.0, 1.0);
    Normalization normalization = Normalization::FixedNbarLO;
    /// nbar_LO held under FixedNbarLO; defaults to held.nbar_lo(). Lets an r
    /// sweep carry a squeeze phase in held.xi without moving the target.
    std::optional<double> nbar_lo;
    OracleMode oracle = OracleMode::SpotCheck;
    /// Per-mode cutoff override; default is each mode's adequacy rule.
    std::optional<int> cutoff;
};

struct SweepRow
{
    double value = 0.0;
    double nbar_lo = 0.0;
    double snr_analytic = 0.0;
    double snr_numeric = 0.0;
    double var0_s_analytic = 0.0;
    double var0_s_numeric = 0.0;
    double var0_sprime_analytic = 0.0;
    double var0_sprime_numeric = 0.0;
    /// Numeric SNR over the numeric SNR of a coherent LO with the same nbar_LO
    /// and phases; NaN when that reference SNR is zero.
    double snr_ratio = 0.0;
    /// Largest factorized-vs-brute-force deviation, relative to the sum of
    /// per-term magnitudes, if checked.
    std::optional<double> oracle_deviation;
    bool agree = false;
};

inline constexpr double kAgreementTolerance = 1e-5;
inline constexpr double kOracleTolerance = 1e-8;

/// Relative deviation |analytic - numeric| / max(|analytic|, 1e-9).
double relative_deviation(double analytic, double numeric);

/// Baseline parameters moved to `value` of the swept parameter, with the
/// normalization applied. Throws ConfigurationError for impossible requests.
RadarParams params_at(const SweepSpec& spec, double value);

/// Frequencies one heterodyne frequency away from the LO.
std::vector<double> matching_frequencies(const ModeGrid& grid, double omega_h);

/// One row per value, in input order; rows are evaluated concurrently.
/// Throws ConfigurationError if the grid does not match the held parameters.
std::vector<SweepRow> run_snr_sweep(const SweepSpec& spec);

/// Same row layout restricted to r or theta_xi sweeps; contrasts Var0 S
/// (depends on nbar_LO only) with Var0 S' (number variance).
std::vector<SweepRow> run_number_variance_study(const SweepSpec& spec);

struct ImageBandResult
{
    double var_with_image = 0.0;
    double var_without_image = 0.0;
    double ratio = 0.0;
    /// (w_+ + w_-) / w_+.
    double expected_ratio = 0.0;
};

/// Target-absent Var0 S on two grids that differ only by the image mode.
ImageBandResult run_image_band_study(const ModeGrid& grid_with_image, const ModeGrid& grid_without_image,
                                     const RadarParams& p);

struct KernelRow
{
    double tau_periods = 0.0;
    double deviation_kernel_only = 0.0;
    double deviation_outer_phase = 0.0;
};

struct ConventionReport
{
    double theta_h = 0.0;
    PhaseConvention reducing = PhaseConvention::KernelOnly;
    /// Exactly one convention converged at the longest tau.
    bool definitive = false;
    double deviation_kernel_only = 0.0;
    double deviation_outer_phase = 0.0;
};

struct KernelConvergence
{
    std::vector<KernelRow> rows;
    /// max over rows of deviation * tau_periods for the kernel-only form.
    double fitted_c = 0.0;
    bool monotone = false;
    /// Present when theta_H != 0 (both conventions then differ).
    std::optional<ConventionReport> convention;
};

inline constexpr double kKernelConvergenceTolerance = 1e-3;

/// Largest coefficient difference between the finite-tau operator and the
/// tau -> infinity operator, relative to the largest infinite-tau coefficient.
/// Evaluated at tau = (N + j/8) heterodyne periods for j = 0..7 and maximized,
/// since at whole periods every off-resonant term vanishes identically.
double kernel_deviation(const ModeGrid& grid, double omega_h, double theta_h, double tau_periods,
                        PhaseConvention convention);

/// Values are integration times in heterodyne periods.
KernelConvergence run_kernel_convergence(const SweepSpec& spec);

struct DetectionPoint
{
    double pfa = 0.0;
    double pd = 0.0;
};

/// Equal-variance Gaussian detection: pd = Q(Q^-1(pfa) - sqrt(snr)).
std::vector<DetectionPoint> gaussian_detection_curve(double snr, std::span<const double> pfa_values);

/// Standard normal upper tail and its inverse.
double normal_tail(double x);
double inverse_normal_tail(double p);

}  // namespace sqlo

#endif  // SQLO_EXPERIMENTS_HPP
