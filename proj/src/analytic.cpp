#include "sqlo/analytic.hpp"

#include <cmath>
#include <numeric>

#include "sqlo/errors.hpp"

namespace sqlo
{
namespace
{
double phase_factor(const RadarParams& p)
{
    const double x = p.phase_offset();
    return p.variant == DetectorVariant::Balanced ? std::sin(x) : std::cos(x);
}

bool finite(Complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

void RadarParams::validate() const
{
    if (!finite(alpha) || !finite(xi) || !finite(beta) || !std::isfinite(theta_h) || !std::isfinite(omega_t) ||
        !std::isfinite(omega_lo) || !std::isfinite(g))
        throw InvalidArgument("radar parameters must be finite");
    if (!(omega_lo > 0.0))
        throw InvalidArgument("omega_lo must be > 0");
    if (!(omega_t > omega_lo))
        throw InvalidArgument("omega_t must exceed omega_lo");
    if (!(g > 0.0))
        throw InvalidArgument("g must be > 0");
}

double RadarParams::nbar_lo() const
{
    const double s = std::sinh(r());
    return std::norm(alpha) + s * s;
}

double mean_s_present(const RadarParams& p, BandApproximation mode)
{
    const double w = mode == BandApproximation::Exact ? std::sqrt(p.omega_t * p.omega_lo) : p.omega_lo;
    return p.g * w * std::abs(p.alpha) * std::abs(p.beta) * phase_factor(p);
}

double var0_s(const RadarParams& p, std::span<const double> matching_freqs)
{
    const double sum = std::accumulate(matching_freqs.begin(), matching_freqs.end(), 0.0);
    const double half_g = 0.5 * p.g;
    return half_g * half_g * p.nbar_lo() * p.omega_lo * sum;
}

double var0_s_narrowband(const RadarParams& p)
{
    return 0.5 * p.g * p.g * p.omega_lo * p.omega_lo * p.nbar_lo();
}

double snr(const RadarParams& p)
{
    const double nbar = p.nbar_lo();
    if (!(nbar > 0.0))
        throw UndefinedSnr("SNR undefined: LO carries no photons, so the target-absent variance vanishes");
    const double s = std::sinh(p.r());
    const double c = phase_factor(p);
    return 2.0 * (1.0 - s * s / nbar) * p.nbar_t() * c * c;
}

double snr_exact(const RadarParams& p, std::span<const double> matching_freqs)
{
    return snr_definition(mean_s_present(p, BandApproximation::Exact), 0.0, var0_s(p, matching_freqs));
}

double exact_grid_correction(const RadarParams& p, std::span<const double> matching_freqs)
{
    const double sum = std::accumulate(matching_freqs.begin(), matching_freqs.end(), 0.0);
    return 2.0 * p.omega_t / sum;
}

double snr_definition(double mean1, double mean0, double var0)
{
    if (!(var0 > 0.0))
        throw UndefinedSnr("SNR undefined for non-positive target-absent variance");
    const double d = mean1 - mean0;
    return d * d / var0;
}

double number_variance_closed(const RadarParams& p, std::optional<int> cutoff)
{
    const auto spec = SingleModeSpec::squeezed_coherent(p.alpha, p.xi);
    const double scale = p.g * p.omega_lo;
    return scale * scale * number_variance(realize(spec, cutoff));
}

}  // namespace sqlo
