#ifndef SQLO_ANALYTIC_HPP
#define SQLO_ANALYTIC_HPP

#include <optional>
#include <span>

#include "sqlo/fock.hpp"

namespace sqlo
{
enum class DetectorVariant
{
    Single,
    /// Two-detector beam-splitter layout; the reflected beam picks up a pi/2
    /// phase, turning cos into sin.
    Balanced
};

/// Exact grid sums, or the narrowband form with every optical frequency set to omega_lo.
enum class BandApproximation
{
    Exact,
    Narrowband
};

struct RadarParams
{
    Complex alpha{2.0, 0.0};
    Complex xi{};
    Complex beta{1.0, 0.0};
    double theta_h = 0.0;
    double omega_t = 101.0;
    double omega_lo = 100.0;
    double g = 1.0;
    DetectorVariant variant = DetectorVariant::Single;

    /// Throws InvalidArgument unless omega_t > omega_lo > 0, g > 0, and all
    /// values are finite.
    void validate() const;

    double r() const { return std::abs(xi); }
    double theta_t() const { return std::arg(beta); }
    double theta_lo() const { return std::arg(alpha); }
    double omega_h() const { return omega_t - omega_lo; }
    double nbar_t() const { return std::norm(beta); }
    /// |alpha|^2 + sinh^2 r.
    double nbar_lo() const;
    /// theta_T - theta_LO + theta_H.
    double phase_offset() const { return theta_t() - theta_lo() + theta_h; }
};

/// Target-present mean of S: g sqrt(w_T w_LO) |alpha||beta| cos(phase offset),
/// sin for the balanced variant. Narrowband replaces sqrt(w_T w_LO) by w_LO.
double mean_s_present(const RadarParams& p, BandApproximation mode = BandApproximation::Exact);

/// Target-absent variance of S: (g/2)^2 nbar_LO w_LO sum_k w_k over the modes
/// one heterodyne frequency away from the LO.
double var0_s(const RadarParams& p, std::span<const double> matching_freqs);

/// Narrowband variance g^2 w_LO^2 nbar_LO / 2 (image and target bands both
/// counted at w_LO).
double var0_s_narrowband(const RadarParams& p);

/// 2 (1 - sinh^2 r / nbar_LO) nbar_T cos^2(phase offset); sin^2 when balanced.
/// Throws UndefinedSnr when nbar_LO = 0.
double snr(const RadarParams& p);

/// SNR from the exact-grid mean and variance. Equals snr(p) times
/// exact_grid_correction(p, matching_freqs).
double snr_exact(const RadarParams& p, std::span<const double> matching_freqs);

/// 2 w_T / sum_k w_k, the factor separating exact-grid and narrowband SNR.
double exact_grid_correction(const RadarParams& p, std::span<const double> matching_freqs);

/// (mean1 - mean0)^2 / var0. Throws UndefinedSnr when var0 <= 0.
double snr_definition(double mean1, double mean0, double var0);

/// Target-absent variance of the zero-frequency statistic:
/// (g w_LO)^2 var(n_LO), with var(n_LO) taken from the number distribution
/// of the constructed LO state.
double number_variance_closed(const RadarParams& p, std::optional<int> cutoff = std::nullopt);

}  // namespace sqlo

#endif  // SQLO_ANALYTIC_HPP
