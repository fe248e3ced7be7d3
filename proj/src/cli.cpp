#include "sqlo/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sqlo/errors.hpp"
#include "sqlo/verification.hpp"

namespace sqlo::cli
{
namespace
{
constexpr std::array<std::string_view, 19> kKeys{
    "alpha_re", "alpha_im", "xi_re",  "xi_im",   "beta_re",     "beta_im",     "theta_h",
    "omega_lo", "omega_h",  "g",      "cutoff",  "normalization", "values",    "output_path",
    "oracle_mode", "sweep", "snr",    "variant", "nbar_lo",
};

bool known_key(std::string_view key)
{
    return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value))
        throw UsageError(key, "'" + key + "' expects a finite real number, got '" + std::string(text) + "'");
    return value;
}

std::vector<double> parse_list(const std::string& key, std::string_view text)
{
    std::vector<double> out;
    while (true)
    {
        const auto comma = text.find(',');
        out.push_back(parse_real(key, text.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

Command parse_command(const std::string& name)
{
    static const std::map<std::string, Command, std::less<>> table{
        {"verify", Command::Verify},          {"sweep-snr", Command::SweepSnr}, {"sweep-numvar", Command::SweepNumvar},
        {"image-band", Command::ImageBand}, {"kernel", Command::Kernel},      {"roc", Command::Roc},
    };
    const auto it = table.find(name);
    if (it == table.end())
        throw UsageError("command", "unknown command '" + name + "'");
    return it->second;
}

template <typename Enum>
Enum parse_choice(const std::string& key, const std::string& value, std::initializer_list<std::pair<const char*, Enum>> choices)
{
    for (const auto& [name, e] : choices)
        if (value == name)
            return e;
    std::string allowed;
    for (const auto& [name, e] : choices)
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    throw UsageError(key, "'" + key + "' must be one of: " + allowed);
}

std::string join_row(std::initializer_list<std::string> cells)
{
    std::string line;
    for (const auto& c : cells)
    {
        if (!line.empty())
            line += ',';
        line += c;
    }
    line += '\n';
    return line;
}

std::string fmt_bool(bool b)
{
    return b ? "true" : "false";
}

SweepSpec sweep_spec(const RunConfig& config)
{
    SweepSpec spec;
    spec.parameter = config.sweep;
    spec.values = config.values;
    spec.held = config.params;
    spec.grid = ModeGrid::heterodyne(config.params.omega_lo, config.omega_h, true, config.params.g);
    spec.normalization = config.normalization;
    spec.oracle = config.oracle_mode;
    spec.cutoff = config.cutoff;
    spec.nbar_lo = config.nbar_lo;
    return spec;
}

std::string render(const RunConfig& config, std::ostream& err, int& status)
{
    std::string csv;
    status = kExitOk;
    switch (config.command)
    {
    case Command::Verify: {
        csv += join_row({"check", "status", "max_deviation"});
        for (const auto& check : run_verification())
        {
            csv += join_row({check.name, check.pass ? "pass" : "fail", format_double(check.max_deviation)});
            if (!check.pass)
                status = kExitCheckFailed;
        }
        break;
    }
    case Command::SweepSnr: {
        csv += join_row({"value", "snr_analytic", "snr_numeric", "snr_ratio", "var0_s", "var0_sprime", "agree"});
        for (const auto& row : run_snr_sweep(sweep_spec(config)))
            csv += join_row({format_double(row.value), format_double(row.snr_analytic), format_double(row.snr_numeric),
                             format_double(row.snr_ratio), format_double(row.var0_s_numeric),
                             format_double(row.var0_sprime_numeric), fmt_bool(row.agree)});
        break;
    }
    case Command::SweepNumvar: {
        csv += join_row({"value", "nbar_lo", "var0_s_analytic", "var0_s_numeric", "var0_sprime_analytic",
                         "var0_sprime_numeric", "agree"});
        for (const auto& row : run_number_variance_study(sweep_spec(config)))
            csv += join_row({format_double(row.value), format_double(row.nbar_lo), format_double(row.var0_s_analytic),
                             format_double(row.var0_s_numeric), format_double(row.var0_sprime_analytic),
                             format_double(row.var0_sprime_numeric), fmt_bool(row.agree)});
        break;
    }
    case Command::ImageBand: {
        csv += join_row({"omega_h", "var_with_image", "var_without_image", "ratio", "expected_ratio"});
        const std::vector<double> hs = config.values.empty() ? std::vector<double>{config.omega_h} : config.values;
        for (double h : hs)
        {
            RadarParams p = config.params;
            p.omega_t = p.omega_lo + h;
            const auto res = run_image_band_study(ModeGrid::heterodyne(p.omega_lo, h, true, p.g),
                                                  ModeGrid::heterodyne(p.omega_lo, h, false, p.g), p);
            csv += join_row({format_double(h), format_double(res.var_with_image), format_double(res.var_without_image),
                             format_double(res.ratio), format_double(res.expected_ratio)});
        }
        break;
    }
    case Command::Kernel: {
        SweepSpec spec = sweep_spec(config);
        spec.parameter = SweepParameter::Tau;
        if (spec.values.empty())
            spec.values = {1e2, 1e3, 1e4};
        const auto study = run_kernel_convergence(spec);
        csv += join_row({"tau_periods", "deviation_kernel_only", "deviation_outer_phase"});
        for (const auto& row : study.rows)
            csv += join_row({format_double(row.tau_periods), format_double(row.deviation_kernel_only),
                             format_double(row.deviation_outer_phase)});
        err << "kernel-only deviation " << (study.monotone ? "decreases" : "does not decrease")
            << " with tau; C = " << format_double(study.fitted_c) << " (deviation <= C / periods)\n";
        if (study.convention)
        {
            const auto& c = *study.convention;
            err << "theta_h = " << format_double(c.theta_h) << ": "
                << (c.definitive ? (c.reducing == PhaseConvention::KernelOnly ? "kernel-only" : "outer-phase")
                                 : "no single")
                << " convention reduces to the infinite-time operator (kernel-only "
                << format_double(c.deviation_kernel_only) << ", outer-phase " << format_double(c.deviation_outer_phase)
                << ")\n";
        }
        break;
    }
    case Command::Roc: {
        const std::vector<double> pfa =
            config.values.empty() ? std::vector<double>{1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5} : config.values;
        csv += join_row({"pfa", "pd"});
        for (const auto& pt : gaussian_detection_curve(config.snr.value_or(0.0), pfa))
            csv += join_row({format_double(pt.pfa), format_double(pt.pd)});
        break;
    }
    }
    return csv;
}

}  // namespace

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::map<std::string, std::string> parse_config_text(std::string_view text)
{
    std::map<std::string, std::string> out;
    int line_no = 0;
    while (!text.empty())
    {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("config", "config line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw UsageError("config", "config line " + std::to_string(line_no) + " has no key");
        out[key] = value;
    }
    return out;
}

RunConfig parse_config(const std::vector<std::string>& args, std::string_view config_text)
{
    std::map<std::string, std::string> merged = parse_config_text(config_text);
    for (const auto& [key, value] : merged)
        if (!known_key(key))
            throw UsageError(key, "unknown key '" + key + "'");

    for (const auto& a : args)
    {
        if (!a.starts_with("--"))
            continue;
        const std::string key = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
        if (!known_key(key))
            throw UsageError(key, "unknown key '" + key + "'");
    }

    CLI::App app{"sqlo"};
    std::string command;
    app.add_option("command", command)->required();
    std::map<std::string, std::string> flags;
    for (const auto key : kKeys)
        app.add_option("--" + std::string(key), flags[std::string(key)]);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        throw UsageError("command", e.what());
    }
    for (const auto key : kKeys)
        if (app.count("--" + std::string(key)) > 0)
            merged[std::string(key)] = flags[std::string(key)];

    RunConfig cfg;
    cfg.command = parse_command(command);
    const auto real = [&](const char* key, double fallback) {
        const auto it = merged.find(key);
        return it == merged.end() ? fallback : parse_real(key, it->second);
    };
    const auto has = [&](const char* key) { return merged.contains(key); };

    cfg.params.alpha = {real("alpha_re", 2.0), real("alpha_im", 0.0)};
    cfg.params.xi = {real("xi_re", 0.0), real("xi_im", 0.0)};
    cfg.params.beta = {real("beta_re", 1.0), real("beta_im", 0.0)};
    cfg.params.theta_h = real("theta_h", 0.0);
    cfg.params.omega_lo = real("omega_lo", 100.0);
    cfg.omega_h = real("omega_h", 1.0);
    cfg.params.g = real("g", 1.0);
    if (!(cfg.omega_h > 0.0))
        throw UsageError("omega_h", "'omega_h' must be > 0 (target frequency above the LO)");
    if (!(cfg.params.omega_lo > cfg.omega_h))
        throw UsageError("omega_lo", "'omega_lo' must exceed omega_h so the image band stays positive");
    if (!(cfg.params.g > 0.0))
        throw UsageError("g", "'g' must be > 0");
    cfg.params.omega_t = cfg.params.omega_lo + cfg.omega_h;

    if (has("cutoff") && merged["cutoff"] != "auto")
    {
        const double c = parse_real("cutoff", merged["cutoff"]);
        if (c < 1.0 || c != std::floor(c) || c > 1e6)
            throw UsageError("cutoff", "'cutoff' must be 'auto' or an integer >= 1");
        cfg.cutoff = static_cast<int>(c);
    }
    if (has("normalization"))
        cfg.normalization = parse_choice<Normalization>(
            "normalization", merged["normalization"],
            {{"fixed-nbar", Normalization::FixedNbarLO}, {"fixed-alpha", Normalization::FixedAlpha}});
    if (has("sweep"))
        cfg.sweep = parse_choice<SweepParameter>("sweep", merged["sweep"],
                                                 {{"r", SweepParameter::R},
                                                  {"theta_xi", SweepParameter::ThetaXi},
                                                  {"theta_offset", SweepParameter::ThetaOffset},
                                                  {"alpha_mag", SweepParameter::AlphaMag}});
    if (has("oracle_mode"))
        cfg.oracle_mode = parse_choice<OracleMode>("oracle_mode", merged["oracle_mode"],
                                                   {{"spot", OracleMode::SpotCheck}, {"full", OracleMode::Full}});
    if (has("variant"))
        cfg.params.variant = parse_choice<DetectorVariant>(
            "variant", merged["variant"], {{"single", DetectorVariant::Single}, {"balanced", DetectorVariant::Balanced}});
    if (has("values"))
        cfg.values = parse_list("values", merged["values"]);
    if (has("snr"))
    {
        cfg.snr = parse_real("snr", merged["snr"]);
        if (*cfg.snr < 0.0)
            throw UsageError("snr", "'snr' must be >= 0");
    }
    if (has("nbar_lo"))
    {
        cfg.nbar_lo = parse_real("nbar_lo", merged["nbar_lo"]);
        if (!(*cfg.nbar_lo > 0.0))
            throw UsageError("nbar_lo", "'nbar_lo' must be > 0");
    }
    if (has("output_path"))
        cfg.output_path = merged["output_path"];

    const bool sweep = cfg.command == Command::SweepSnr || cfg.command == Command::SweepNumvar;
    if (sweep && cfg.values.empty())
        throw UsageError("values", "'values' is required for " + command);
    if (cfg.command == Command::Roc && !cfg.snr)
        throw UsageError("snr", "'snr' is required for roc");
    return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    std::string csv;
    int status = kExitOk;
    try
    {
        csv = render(config, err, status);
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (config.output_path.empty() || config.output_path == "-")
    {
        out << csv;
        out.flush();
        if (!out)
        {
            err << "error: failed writing to standard output\n";
            return kExitIo;
        }
        return status;
    }
    std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
    file << csv;
    file.close();
    if (!file)
    {
        err << "error: cannot write '" << config.output_path << "'\n";
        return kExitIo;
    }
    return status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    std::optional<std::string> config_path;
    for (int i = 1; i < argc; ++i)
    {
        const std::string a = argv[i];
        if (a == "--help" || a == "-h")
        {
            out << "usage: sqlo <verify|sweep-snr|sweep-numvar|image-band|kernel|roc> [--key value ...] "
                   "[--config file]\nkeys:";
            for (const auto k : kKeys)
                out << ' ' << k;
            out << '\n';
            return kExitOk;
        }
        if (a == "--config")
        {
            if (i + 1 >= argc)
            {
                err << "error: --config needs a path\n";
                return kExitUsage;
            }
            config_path = argv[++i];
        }
        else if (a.starts_with("--config="))
            config_path = a.substr(9);
        else
            args.push_back(a);
    }

    std::string text;
    if (config_path)
    {
        std::ifstream in(*config_path, std::ios::binary);
        if (!in)
        {
            err << "error: cannot read config file '" << *config_path << "'\n";
            return kExitIo;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    try
    {
        return run(parse_config(args, text), out, err);
    }
    catch (const UsageError& e)
    {
        err << "usage error [" << e.key() << "]: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace sqlo::cli
