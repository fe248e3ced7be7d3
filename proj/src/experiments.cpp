#include "sqlo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "sqlo/errors.hpp"
#include "sqlo/evaluate.hpp"

namespace sqlo
{
namespace
{
bool close(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

void check_grid(const ModeGrid& grid, const RadarParams& p)
{
    p.validate();
    if (!close(grid.omega_lo(), p.omega_lo) || !close(grid.omega_target(), p.omega_t))
        throw ConfigurationError("grid LO/target frequencies do not match the radar parameters");
    if (!close(grid.scale_g(), p.g))
        throw ConfigurationError("grid scale constant g does not match the radar parameters");
    if (matching_frequencies(grid, p.omega_h()).empty())
        throw ConfigurationError("grid has no mode one heterodyne frequency from the LO");
}

SingleModeSpec lo_spec(const RadarParams& p)
{
    return SingleModeSpec::squeezed_coherent(p.alpha, p.xi);
}

struct NumericMoments
{
    double snr = 0.0;
    double var0_s = 0.0;
    double var0_sprime = 0.0;
    std::optional<double> oracle_deviation;
};

// Sum of per-term magnitudes: the scale against which a cancelling sum is judged.
double cancellation_scale(const ProductState& st, const OperatorSum& op)
{
    double total = 0.0;
    for (const auto& t : op.terms())
    {
        OperatorSum single(op.mode_count());
        single.add(t.coeff, t.monomial);
        total += std::abs(expectation(st, single));
    }
    return total;
}

NumericMoments numeric_moments(const ModeGrid& grid, const RadarParams& p, std::optional<int> cutoff, bool oracle)
{
    const SignalOperatorSpec op_spec{.omega_h = p.omega_h(), .theta_h = p.theta_h};
    const OperatorSum s = build_signal_operator_infinite(grid, op_spec);
    const OperatorSum sprime = build_sprime(grid);
    const auto absent = ProductState::target_absent(grid, lo_spec(p), cutoff);
    const auto present = ProductState::target_present(grid, lo_spec(p), p.beta, cutoff);

    NumericMoments out;
    const double mean1 = expectation(present, s).real();
    const double mean0 = expectation(absent, s).real();
    out.var0_s = variance(absent, s);
    out.var0_sprime = variance(absent, sprime);
    out.snr = snr_definition(mean1, mean0, out.var0_s);

    if (oracle && grid.size() <= 3)
    {
        // The LO cutoff here routinely exceeds the default guard of 30; three
        // modes keep the table small regardless.
        const BruteForceLimits limits{.max_modes = 3, .max_cutoff = 4096};
        double worst = 0.0;
        const auto compare = [&](const ProductState& st, const OperatorSum& op) {
            const Complex f = expectation(st, op);
            const Complex b = brute_force_expectation(st, op, limits);
            worst = std::max(worst, std::abs(f - b) / std::max(cancellation_scale(st, op), 1e-9));
        };
        compare(present, s);
        compare(absent, square(s));
        compare(absent, square(sprime));
        out.oracle_deviation = worst;
    }
    return out;
}

SweepRow evaluate_row(const SweepSpec& spec, double value, const std::vector<double>& matching, bool oracle)
{
    const RadarParams p = params_at(spec, value);
    SweepRow row;
    row.value = value;
    row.nbar_lo = p.nbar_lo();
    row.snr_analytic = snr_exact(p, matching);
    row.var0_s_analytic = var0_s(p, matching);
    row.var0_sprime_analytic = number_variance_closed(p, spec.cutoff);

    const NumericMoments num = numeric_moments(spec.grid, p, spec.cutoff, oracle);
    row.snr_numeric = num.snr;
    row.var0_s_numeric = num.var0_s;
    row.var0_sprime_numeric = num.var0_sprime;
    row.oracle_deviation = num.oracle_deviation;

    RadarParams coherent = p;
    coherent.xi = 0.0;
    coherent.alpha = std::polar(std::sqrt(p.nbar_lo()), std::arg(p.alpha));
    const double reference = numeric_moments(spec.grid, coherent, spec.cutoff, false).snr;
    // Same phases as the row, so a vanishing projection leaves no ratio.
    row.snr_ratio = reference > 1e-12 * std::max(p.nbar_t(), 1.0) ? row.snr_numeric / reference : std::numeric_limits<double>::quiet_NaN();

    row.agree = relative_deviation(row.snr_analytic, row.snr_numeric) <= kAgreementTolerance &&
                relative_deviation(row.var0_s_analytic, row.var0_s_numeric) <= kAgreementTolerance &&
                relative_deviation(row.var0_sprime_analytic, row.var0_sprime_numeric) <= kAgreementTolerance &&
                (!row.oracle_deviation || *row.oracle_deviation <= kOracleTolerance);
    return row;
}

std::vector<SweepRow> run_rows(const SweepSpec& spec)
{
    if (spec.values.empty())
        throw ConfigurationError("sweep needs at least one value");
    for (double v : spec.values)
        if (!std::isfinite(v))
            throw ConfigurationError("sweep values must be finite");
    if (spec.parameter == SweepParameter::Tau)
        throw ConfigurationError("tau sweeps belong to the kernel convergence study");
    check_grid(spec.grid, spec.held);
    const auto matching = matching_frequencies(spec.grid, spec.held.omega_h());

    const std::size_t n = spec.values.size();
    std::vector<std::future<SweepRow>> pending;
    pending.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const bool oracle = spec.oracle == OracleMode::Full || i == 0 || i == n / 2 || i + 1 == n;
        pending.push_back(std::async(std::launch::async, evaluate_row, std::cref(spec), spec.values[i],
                                     std::cref(matching), oracle));
    }
    std::vector<SweepRow> rows;
    rows.reserve(n);
    for (auto& f : pending)
        rows.push_back(f.get());
    return rows;
}

}  // namespace

double relative_deviation(double analytic, double numeric)
{
    return std::abs(analytic - numeric) / std::max(std::abs(analytic), 1e-9);
}

RadarParams params_at(const SweepSpec& spec, double value)
{
    RadarParams p = spec.held;
    const double nbar = spec.nbar_lo.value_or(spec.held.nbar_lo());
    switch (spec.parameter)
    {
    case SweepParameter::R: {
        if (value < 0.0)
            throw ConfigurationError("squeezing parameter r must be >= 0");
        const double xi_phase = std::arg(spec.held.xi);
        p.xi = std::polar(value, xi_phase);
        if (spec.normalization == Normalization::FixedNbarLO)
        {
            const double s = std::sinh(value);
            if (s * s > nbar)
                throw ConfigurationError("r = " + std::to_string(value) +
                                         " needs more photons than the fixed nbar_LO = " + std::to_string(nbar));
            p.alpha = std::polar(std::sqrt(nbar - s * s), std::arg(spec.held.alpha));
        }
        break;
    }
    case SweepParameter::ThetaXi:
        p.xi = std::polar(spec.held.r(), value);
        break;
    case SweepParameter::ThetaOffset:
        p.theta_h = value - spec.held.theta_t() + spec.held.theta_lo();
        break;
    case SweepParameter::AlphaMag:
        if (value < 0.0)
            throw ConfigurationError("|alpha| must be >= 0");
        p.alpha = std::polar(value, std::arg(spec.held.alpha));
        break;
    case SweepParameter::Tau:
        throw ConfigurationError("tau does not parametrize the radar state");
    }
    return p;
}

std::vector<double> matching_frequencies(const ModeGrid& grid, double omega_h)
{
    std::vector<double> out;
    const double tol = 1e-9 * omega_h;
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (std::abs(std::abs(grid.omega_lo() - grid.freqs()[k]) - omega_h) <= tol)
            out.push_back(grid.freqs()[k]);
    return out;
}

std::vector<SweepRow> run_snr_sweep(const SweepSpec& spec)
{
    return run_rows(spec);
}

std::vector<SweepRow> run_number_variance_study(const SweepSpec& spec)
{
    if (spec.parameter != SweepParameter::R && spec.parameter != SweepParameter::ThetaXi)
        throw ConfigurationError("number-variance study sweeps r or theta_xi only");
    return run_rows(spec);
}

ImageBandResult run_image_band_study(const ModeGrid& grid_with_image, const ModeGrid& grid_without_image,
                                     const RadarParams& p)
{
    check_grid(grid_with_image, p);
    check_grid(grid_without_image, p);
    const double omega_h = p.omega_h();
    const double image = p.omega_lo - omega_h;

    std::vector<double> with = grid_with_image.freqs();
    std::vector<double> without = grid_without_image.freqs();
    std::sort(with.begin(), with.end());
    std::sort(without.begin(), without.end());
    const auto image_it =
        std::find_if(with.begin(), with.end(), [&](double w) { return std::abs(w - image) <= 1e-9 * omega_h; });
    if (image_it == with.end())
        throw ConfigurationError("first grid has no image-band mode at omega_lo - omega_h");
    with.erase(image_it);
    if (with != without)
        throw ConfigurationError("grids must be identical apart from the image-band mode");

    const SignalOperatorSpec op_spec{.omega_h = omega_h, .theta_h = p.theta_h};
    ImageBandResult out;
    out.var_with_image = variance(ProductState::target_absent(grid_with_image, lo_spec(p)),
                                  build_signal_operator_infinite(grid_with_image, op_spec));
    out.var_without_image = variance(ProductState::target_absent(grid_without_image, lo_spec(p)),
                                     build_signal_operator_infinite(grid_without_image, op_spec));
    out.ratio = out.var_with_image / out.var_without_image;
    out.expected_ratio = (p.omega_t + image) / p.omega_t;
    return out;
}

double kernel_deviation(const ModeGrid& grid, double omega_h, double theta_h, double tau_periods,
                        PhaseConvention convention)
{
    const SignalOperatorSpec infinite_spec{.omega_h = omega_h, .theta_h = theta_h};
    const OperatorSum reference = build_signal_operator_infinite(grid, infinite_spec);
    double scale = 0.0;
    for (const auto& t : reference.terms())
        scale = std::max(scale, std::abs(t.coeff));

    const double period = 2.0 * std::numbers::pi / omega_h;
    const auto n = static_cast<int>(grid.size());
    double worst = 0.0;
    for (int j = 0; j < 8; ++j)
    {
        SignalOperatorSpec finite_spec = infinite_spec;
        finite_spec.tau = (tau_periods + j / 8.0) * period;
        finite_spec.convention = convention;
        const OperatorSum finite = build_signal_operator_finite(grid, finite_spec);
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                worst = std::max(worst, std::abs(finite.pair_coefficient(l, k) - reference.pair_coefficient(l, k)));
    }
    return worst / scale;
}

KernelConvergence run_kernel_convergence(const SweepSpec& spec)
{
    if (spec.values.empty())
        throw ConfigurationError("kernel study needs at least one tau");
    for (double v : spec.values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigurationError("tau values (in periods) must be finite and > 0");
    const double omega_h = spec.held.omega_h();
    const double theta_h = spec.held.theta_h;

    KernelConvergence out;
    for (double periods : spec.values)
    {
        out.rows.push_back(KernelRow{
            .tau_periods = periods,
            .deviation_kernel_only = kernel_deviation(spec.grid, omega_h, theta_h, periods, PhaseConvention::KernelOnly),
            .deviation_outer_phase = kernel_deviation(spec.grid, omega_h, theta_h, periods, PhaseConvention::OuterPhase),
        });
    }

    out.monotone = true;
    for (std::size_t i = 0; i < out.rows.size(); ++i)
    {
        out.fitted_c = std::max(out.fitted_c, out.rows[i].deviation_kernel_only * out.rows[i].tau_periods);
        if (i > 0 && (out.rows[i].tau_periods > out.rows[i - 1].tau_periods) &&
            !(out.rows[i].deviation_kernel_only < out.rows[i - 1].deviation_kernel_only))
            out.monotone = false;
    }

    if (theta_h != 0.0)
    {
        const auto longest = std::max_element(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) {
            return a.tau_periods < b.tau_periods;
        });
        ConventionReport report;
        report.theta_h = theta_h;
        report.deviation_kernel_only = longest->deviation_kernel_only;
        report.deviation_outer_phase = longest->deviation_outer_phase;
        const bool kernel_ok = report.deviation_kernel_only <= kKernelConvergenceTolerance;
        const bool outer_ok = report.deviation_outer_phase <= kKernelConvergenceTolerance;
        report.definitive = kernel_ok != outer_ok;
        report.reducing = outer_ok && !kernel_ok ? PhaseConvention::OuterPhase : PhaseConvention::KernelOnly;
        out.convention = report;
    }
    return out;
}

double normal_tail(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double inverse_normal_tail(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw InvalidArgument("tail probability must lie in (0, 1)");
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

std::vector<DetectionPoint> gaussian_detection_curve(double snr, std::span<const double> pfa_values)
{
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw InvalidArgument("SNR must be finite and >= 0");
    const double deflection = std::sqrt(snr);
    std::vector<DetectionPoint> out;
    out.reserve(pfa_values.size());
    for (double pfa : pfa_values)
    {
        if (!(pfa > 0.0 && pfa < 1.0))
            throw InvalidArgument("false-alarm probability must lie in (0, 1)");
        out.push_back({pfa, normal_tail(inverse_normal_tail(pfa) - deflection)});
    }
    return out;
}

}  // namespace sqlo
