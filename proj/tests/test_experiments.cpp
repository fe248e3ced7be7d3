#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sqlo/errors.hpp"
#include "sqlo/experiments.hpp"

using namespace sqlo;
using Catch::Approx;

namespace
{
double sinh2(double r)
{
    return std::sinh(r) * std::sinh(r);
}

SweepSpec r_sweep(std::vector<double> values)
{
    SweepSpec spec;
    spec.values = std::move(values);
    return spec;
}

// Upper tail of the standard normal by Simpson integration of the density.
double tail_by_quadrature(double x)
{
    const auto density = [](double t) { return oracle::cd(std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi)); };
    return oracle::simpson(density, x, 12.0, 200000).real();
}
}  // namespace

TEST_CASE("r_sweep_at_zero_has_unit_ratio")
{
    const auto rows = run_snr_sweep(r_sweep({0.0}));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].snr_ratio == 1.0);
    CHECK(rows[0].agree);
}

TEST_CASE("r_sweep_ratio_table")
{
    // 1 - sinh^2 r / 4
    const std::vector<double> expected{1.0, 0.9840467543, 0.9321149206, 0.6547255386};
    const auto rows = run_snr_sweep(r_sweep({0.0, 0.25, 0.5, 1.0}));
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(std::abs(rows[i].snr_ratio - expected[i]) <= 1e-4);
        CHECK(std::abs(rows[i].snr_ratio - (1.0 - sinh2(rows[i].value) / 4.0)) <= 1e-6);
        CHECK(rows[i].nbar_lo == Approx(4.0).epsilon(1e-12));
        CHECK(rows[i].agree);
        if (i > 0)
            CHECK(rows[i].snr_ratio < rows[i - 1].snr_ratio);
    }
    // Spot checks ran at first, middle and last rows.
    CHECK(rows.front().oracle_deviation.has_value());
    CHECK(rows.back().oracle_deviation.has_value());
    for (const auto& row : rows)
        if (row.oracle_deviation)
            CHECK(*row.oracle_deviation <= kOracleTolerance);
}

TEST_CASE("theta_offset_sweep_follows_cos_squared")
{
    SweepSpec spec;
    spec.parameter = SweepParameter::ThetaOffset;
    spec.values = {0.0, std::numbers::pi / 4, std::numbers::pi / 2};
    const auto rows = run_snr_sweep(spec);
    REQUIRE(rows.size() == 3);
    const double top = rows[0].snr_numeric;
    // 2 nbar_T on the exact grid carries the 2 w_T / (w_+ + w_-) factor.
    CHECK(top == Approx(2.0 * 1.01).epsilon(1e-6));
    CHECK(rows[1].snr_numeric / top == Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(rows[2].snr_numeric / top) < 1e-10);
    for (const auto& row : rows)
        CHECK(row.agree);
}

TEST_CASE("fixed_alpha_sweep_raises_nbar")
{
    SweepSpec spec = r_sweep({0.0, 0.5});
    spec.normalization = Normalization::FixedAlpha;
    const auto rows = run_snr_sweep(spec);
    CHECK(rows[0].nbar_lo == Approx(4.0));
    CHECK(rows[1].nbar_lo == Approx(4.0 + sinh2(0.5)).epsilon(1e-12));
}

TEST_CASE("params_at_rejects_impossible_normalization")
{
    SweepSpec spec = r_sweep({2.0});
    CHECK_THROWS_AS(params_at(spec, 2.0), ConfigurationError);
    spec.parameter = SweepParameter::Tau;
    CHECK_THROWS_AS(params_at(spec, 100.0), ConfigurationError);
}

TEST_CASE("sweep_rejects_mismatched_grid")
{
    SweepSpec spec = r_sweep({0.0});
    spec.grid = ModeGrid::heterodyne(100.0, 2.0);
    CHECK_THROWS_AS(run_snr_sweep(spec), ConfigurationError);
}

TEST_CASE("number_variance_study_fixed_nbar_keeps_var0s")
{
    SweepSpec spec = r_sweep({0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
    const auto rows = run_number_variance_study(spec);
    for (const auto& row : rows)
    {
        CHECK(std::abs(row.var0_s_numeric - rows[0].var0_s_numeric) <= 1e-8 * rows[0].var0_s_numeric);
        CHECK(row.agree);
    }
}

TEST_CASE("number_variance_study_fixed_alpha_contrast")
{
    // Some squeeze phase lowers Var0 S' while Var0 S rises with nbar_LO.
    bool found = false;
    for (int j = 0; j < 16 && !found; ++j)
    {
        SweepSpec spec;
        spec.normalization = Normalization::FixedAlpha;
        spec.held.xi = std::polar(1.0, 2 * std::numbers::pi * j / 16);
        for (int i = 0; i <= 10; ++i)
            spec.values.push_back(0.05 * i);
        const auto rows = run_number_variance_study(spec);
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].var0_sprime_numeric < rows[0].var0_sprime_numeric &&
                rows[i].var0_s_numeric > rows[0].var0_s_numeric)
                found = true;
    }
    CHECK(found);
}

TEST_CASE("number_variance_study_squeezed_vacuum_nonnegative")
{
    SweepSpec spec = r_sweep({0.1, 0.3, 0.6});
    spec.normalization = Normalization::FixedAlpha;
    spec.held.alpha = 0.0;
    for (const auto& row : run_number_variance_study(spec))
        CHECK(row.var0_sprime_numeric >= 0.0);
}

TEST_CASE("number_variance_study_rejects_other_parameters")
{
    SweepSpec spec;
    spec.parameter = SweepParameter::AlphaMag;
    spec.values = {1.0};
    CHECK_THROWS_AS(run_number_variance_study(spec), ConfigurationError);
}

TEST_CASE("image_band_ratio")
{
    RadarParams p;
    const auto res = run_image_band_study(ModeGrid::heterodyne(100.0, 1.0), ModeGrid::heterodyne(100.0, 1.0, false), p);
    CHECK(res.ratio == Approx(200.0 / 101.0).margin(1e-6));
    CHECK(res.expected_ratio == Approx(200.0 / 101.0).epsilon(1e-14));
    CHECK(res.var_with_image == Approx(20000.0).epsilon(1e-6));
}

TEST_CASE("image_band_ratio_narrowband_limit")
{
    for (double h : {1e-3, 1e-4})
    {
        RadarParams p;
        p.omega_t = 100.0 + h;
        const auto res =
            run_image_band_study(ModeGrid::heterodyne(100.0, h), ModeGrid::heterodyne(100.0, h, false), p);
        CHECK(res.ratio == Approx(200.0 / (100.0 + h)).margin(1e-6));
        CHECK(std::abs(res.ratio - 2.0) <= 2.0 * h / 100.0 + 1e-9);
    }
}

TEST_CASE("image_band_rejects_unmatched_grids")
{
    RadarParams p;
    CHECK_THROWS_AS(run_image_band_study(ModeGrid::heterodyne(100.0, 1.0), ModeGrid::heterodyne(100.0, 2.0, false), p),
                    ConfigurationError);
}

TEST_CASE("kernel_convergence_at_zero_phase")
{
    SweepSpec spec;
    spec.parameter = SweepParameter::Tau;
    spec.values = {1e2, 1e3, 1e4};
    const auto study = run_kernel_convergence(spec);
    REQUIRE(study.rows.size() == 3);
    CHECK(study.monotone);
    CHECK(study.rows.back().deviation_kernel_only <= kKernelConvergenceTolerance);
    CHECK_FALSE(study.convention.has_value());
    for (const auto& row : study.rows)
    {
        CHECK(row.deviation_kernel_only == row.deviation_outer_phase);
        CHECK(row.deviation_kernel_only * row.tau_periods <= study.fitted_c + 1e-12);
    }
}

TEST_CASE("kernel_convention_report_at_third_pi")
{
    SweepSpec spec;
    spec.parameter = SweepParameter::Tau;
    spec.values = {1e2, 1e3, 1e4};
    spec.held.theta_h = std::numbers::pi / 3;
    const auto study = run_kernel_convergence(spec);
    REQUIRE(study.convention.has_value());
    CHECK(study.convention->definitive);
    CHECK(study.convention->reducing == PhaseConvention::KernelOnly);
    CHECK(study.convention->deviation_kernel_only <= kKernelConvergenceTolerance);
    CHECK(study.convention->deviation_outer_phase > 0.5);
}

TEST_CASE("kernel_deviation_is_order_one_over_tau")
{
    const auto grid = ModeGrid::heterodyne(100.0, 1.0);
    const double d2 = kernel_deviation(grid, 1.0, 0.0, 1e2, PhaseConvention::KernelOnly);
    const double d3 = kernel_deviation(grid, 1.0, 0.0, 1e3, PhaseConvention::KernelOnly);
    CHECK(d2 / d3 == Approx(10.0).epsilon(0.05));
}

TEST_CASE("detection_curve_no_signal_is_diagonal")
{
    const std::vector<double> pfa{1e-6, 0.01, 0.3, 0.5, 0.9};
    for (const auto& pt : gaussian_detection_curve(0.0, pfa))
        CHECK(pt.pd == Approx(pt.pfa).epsilon(1e-12));
}

TEST_CASE("detection_curve_reference_point")
{
    const std::vector<double> pfa{0.05};
    const double pd = gaussian_detection_curve(4.0, pfa)[0].pd;
    // Q(Q^-1(0.05) - 2) with Q^-1(0.05) = 1.6448536...
    CHECK(std::abs(pd - tail_by_quadrature(1.6448536269514722 - 2.0)) <= 1e-9);
    CHECK(std::abs(pd - 0.6388) <= 1e-3);
    CHECK(std::abs(tail_by_quadrature(1.6448536269514722) - 0.05) <= 1e-9);
}

TEST_CASE("detection_curve_half_pfa")
{
    const std::vector<double> pfa{0.5};
    for (double s : {0.0, 1.0, 9.0})
    {
        const double pd = gaussian_detection_curve(s, pfa)[0].pd;
        CHECK(pd >= 0.5);
        CHECK(pd == Approx(tail_by_quadrature(-std::sqrt(s))).epsilon(1e-9));
    }
}

TEST_CASE("detection_curve_monotone")
{
    std::vector<double> pfa;
    for (int i = 1; i < 50; ++i)
        pfa.push_back(i / 50.0);
    double prev_snr_pd = 0.0;
    for (double s : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0})
    {
        const auto curve = gaussian_detection_curve(s, pfa);
        for (std::size_t i = 1; i < curve.size(); ++i)
            CHECK(curve[i].pd >= curve[i - 1].pd);
        CHECK(curve[10].pd >= prev_snr_pd);
        prev_snr_pd = curve[10].pd;
    }
}

TEST_CASE("detection_curve_rejects_bad_pfa")
{
    for (double bad : {0.0, 1.0, -0.1, 1.5, std::nan("")})
    {
        const std::vector<double> pfa{bad};
        CHECK_THROWS_AS(gaussian_detection_curve(1.0, pfa), InvalidArgument);
    }
    const std::vector<double> ok{0.1};
    CHECK_THROWS_AS(gaussian_detection_curve(-1.0, ok), InvalidArgument);
}

TEST_CASE("normal_tail_inverse_round_trip")
{
    for (double p : {1e-10, 1e-4, 0.05, 0.5, 0.8, 0.999})
        CHECK(normal_tail(inverse_normal_tail(p)) == Approx(p).epsilon(1e-12));
}

TEST_CASE("relative_deviation_floor")
{
    CHECK(relative_deviation(2.0, 2.2) == Approx(0.1));
    CHECK(relative_deviation(0.0, 1e-12) == Approx(1e-3));
}
