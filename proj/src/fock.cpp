#include "sqlo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqlo/errors.hpp"

namespace sqlo
{
namespace
{
constexpr double kPoissonTailBound = 1e-10;
constexpr double kSqueezeTailBound = 1e-12;
constexpr double kPhysicsTolerance = 1e-6;

void require_cutoff(int cutoff)
{
    if (cutoff < 1)
        throw InvalidArgument("cutoff must be >= 1, got " + std::to_string(cutoff));
}

// Truncated ladder actions. a^dag on |cutoff> leaves the space and is dropped.
void apply_ladder(Ladder op, std::vector<Complex>& amps)
{
    const std::size_t top = amps.size() - 1;
    if (op == Ladder::Annihilate)
    {
        for (std::size_t n = 0; n < top; ++n)
            amps[n] = std::sqrt(static_cast<double>(n + 1)) * amps[n + 1];
        amps[top] = 0.0;
    }
    else
    {
        for (std::size_t n = top; n > 0; --n)
            amps[n] = std::sqrt(static_cast<double>(n)) * amps[n - 1];
        amps[0] = 0.0;
    }
}

// Anti-Hermitian generator built from a, a^dag, a^2, a^dag^2 on a truncated
// space: G = c1 a^dag + cm1 a + c2 a^dag^2 + cm2 a^2.
struct BandedGenerator
{
    std::size_t dim;
    Complex raise1;
    Complex lower1;
    Complex raise2;
    Complex lower2;

    void apply(const std::vector<Complex>& in, std::vector<Complex>& out) const
    {
        std::fill(out.begin(), out.end(), Complex{});
        for (std::size_t n = 0; n < dim; ++n)
        {
            const Complex v = in[n];
            if (v == Complex{})
                continue;
            const auto nd = static_cast<double>(n);
            if (n + 1 < dim)
                out[n + 1] += raise1 * std::sqrt(nd + 1.0) * v;
            if (n >= 1)
                out[n - 1] += lower1 * std::sqrt(nd) * v;
            if (n + 2 < dim)
                out[n + 2] += raise2 * std::sqrt((nd + 1.0) * (nd + 2.0)) * v;
            if (n >= 2)
                out[n - 2] += lower2 * std::sqrt(nd * (nd - 1.0)) * v;
        }
    }

    // Max column sum of |G|.
    double one_norm() const
    {
        double best = 0.0;
        for (std::size_t n = 0; n < dim; ++n)
        {
            const auto nd = static_cast<double>(n);
            double col = 0.0;
            if (n + 1 < dim)
                col += std::abs(raise1) * std::sqrt(nd + 1.0);
            if (n >= 1)
                col += std::abs(lower1) * std::sqrt(nd);
            if (n + 2 < dim)
                col += std::abs(raise2) * std::sqrt((nd + 1.0) * (nd + 2.0));
            if (n >= 2)
                col += std::abs(lower2) * std::sqrt(nd * (nd - 1.0));
            best = std::max(best, col);
        }
        return best;
    }
};

double max_abs(const std::vector<Complex>& v)
{
    double m = 0.0;
    for (const auto& x : v)
        m = std::max(m, std::abs(x));
    return m;
}

// exp(G) v by scaled Taylor series: (exp(G/s))^s v with ||G/s||_1 <= 2.
std::vector<Complex> exp_times(const BandedGenerator& gen, std::vector<Complex> v)
{
    const double norm = gen.one_norm();
    if (norm == 0.0)
        return v;
    constexpr double kStepNorm = 2.0;
    constexpr int kMaxTerms = 80;
    const auto steps = static_cast<long>(std::ceil(norm / kStepNorm));
    const double inv_steps = 1.0 / static_cast<double>(steps);

    std::vector<Complex> term(v.size());
    std::vector<Complex> next(v.size());
    for (long s = 0; s < steps; ++s)
    {
        term = v;
        for (int k = 1; k <= kMaxTerms; ++k)
        {
            gen.apply(term, next);
            const double scale = inv_steps / k;
            for (std::size_t i = 0; i < next.size(); ++i)
            {
                next[i] *= scale;
                v[i] += next[i];
            }
            term.swap(next);
            if (max_abs(term) <= 1e-18 * max_abs(v))
                break;
        }
    }
    return v;
}

void normalize(std::vector<Complex>& v)
{
    double ns = 0.0;
    for (const auto& x : v)
        ns += std::norm(x);
    const double inv = 1.0 / std::sqrt(ns);
    for (auto& x : v)
        x *= inv;
}

}  // namespace

FockVector FockVector::from_amplitudes(std::vector<Complex> amplitudes)
{
    if (amplitudes.size() < 2)
        throw InvalidArgument("FockVector needs cutoff >= 1");
    FockVector out(std::move(amplitudes));
    const double ns = out.norm_squared();
    if (!(std::abs(ns - 1.0) <= kNormTolerance))
        throw InvalidArgument("FockVector amplitudes are not unit norm (|psi|^2 = " + std::to_string(ns) + ")");
    return out;
}

double FockVector::norm_squared() const noexcept
{
    double ns = 0.0;
    for (const auto& a : amps_)
        ns += std::norm(a);
    return ns;
}

double FockVector::mean_photon_number() const noexcept
{
    double mean = 0.0;
    for (std::size_t n = 0; n < amps_.size(); ++n)
        mean += static_cast<double>(n) * std::norm(amps_[n]);
    return mean;
}

double SingleModeSpec::nominal_mean_photons() const noexcept
{
    const double s = std::sinh(squeeze_r());
    return std::norm(alpha_) + s * s;
}

int default_cutoff(Complex alpha, double r)
{
    const double amag = std::abs(alpha);
    const double base = 4.0 * std::pow(amag + std::sinh(r) + 1.0, 2);
    int cutoff = static_cast<int>(std::ceil(base));
    if (r > 0.0)
    {
        const double displacement = std::ceil(4.0 * std::pow(amag + 1.0, 2));
        const double squeeze_tail = std::ceil(std::log(kSqueezeTailBound) / std::log(std::tanh(r)));
        cutoff = std::max(cutoff, static_cast<int>(displacement + squeeze_tail));
    }
    return std::max(cutoff, 1);
}

int default_cutoff(const SingleModeSpec& spec)
{
    switch (spec.kind())
    {
    case ModeKind::Vacuum:
        return default_cutoff(Complex{}, 0.0);
    case ModeKind::Coherent:
        return std::max(default_cutoff(spec.alpha(), 0.0), minimal_poisson_cutoff(std::norm(spec.alpha())));
    case ModeKind::SqueezedCoherent:
        return default_cutoff(spec.alpha(), spec.squeeze_r());
    }
    return 1;
}

double poisson_tail(double mean, int cutoff)
{
    if (mean <= 0.0)
        return 0.0;
    const double log_mean = std::log(mean);
    double tail = 0.0;
    for (long n = static_cast<long>(cutoff) + 1;; ++n)
    {
        const auto nd = static_cast<double>(n);
        const double term = std::exp(-mean + nd * log_mean - std::lgamma(nd + 1.0));
        tail += term;
        if (nd > mean && (term < 1e-300 || term < 1e-18 * tail))
            break;
    }
    return tail;
}

int minimal_poisson_cutoff(double mean)
{
    int cutoff = 1;
    while (poisson_tail(mean, cutoff) >= kPoissonTailBound)
        ++cutoff;
    return cutoff;
}

FockVector build_vacuum(int cutoff)
{
    require_cutoff(cutoff);
    std::vector<Complex> amps(static_cast<std::size_t>(cutoff) + 1);
    amps[0] = 1.0;
    return FockVector::from_amplitudes(std::move(amps));
}

FockVector build_coherent(Complex beta, int cutoff)
{
    require_cutoff(cutoff);
    const double mean = std::norm(beta);
    if (poisson_tail(mean, cutoff) >= kPoissonTailBound)
    {
        const int needed = minimal_poisson_cutoff(mean);
        throw CutoffTooSmall("coherent state |beta|^2 = " + std::to_string(mean) + " needs cutoff >= " +
                                 std::to_string(needed) + ", got " + std::to_string(cutoff),
                             needed);
    }
    if (mean == 0.0)
        return build_vacuum(cutoff);

    // Log-magnitude recursion keeps large |beta| free of overflow.
    const double log_mag = std::log(std::abs(beta));
    const double phase = std::arg(beta);
    std::vector<Complex> amps(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 0; n <= cutoff; ++n)
    {
        const double nd = n;
        const double lm = -0.5 * mean + nd * log_mag - 0.5 * std::lgamma(nd + 1.0);
        amps[static_cast<std::size_t>(n)] = std::polar(std::exp(lm), nd * phase);
    }
    normalize(amps);
    return FockVector::from_amplitudes(std::move(amps));
}

FockVector build_squeezed_coherent(Complex alpha, Complex xi, int cutoff)
{
    require_cutoff(cutoff);
    const auto dim = static_cast<std::size_t>(cutoff) + 1;
    std::vector<Complex> amps(dim);
    amps[0] = 1.0;

    if (xi != Complex{})
        amps = exp_times(BandedGenerator{dim, 0.0, 0.0, -0.5 * xi, 0.5 * std::conj(xi)}, std::move(amps));
    if (alpha != Complex{})
        amps = exp_times(BandedGenerator{dim, alpha, -std::conj(alpha), 0.0, 0.0}, std::move(amps));
    // The exact truncated exponential is unitary; this only removes roundoff.
    normalize(amps);
    FockVector state = FockVector::from_amplitudes(std::move(amps));

    const double r = std::abs(xi);
    const double expected_n = std::norm(alpha) + std::pow(std::sinh(r), 2);
    const double got_n = state.mean_photon_number();
    const std::array<Ladder, 1> lower{Ladder::Annihilate};
    const Complex got_a = ladder_string_expectation(state, lower);
    const bool n_ok = std::abs(got_n - expected_n) <= kPhysicsTolerance * std::max(1.0, expected_n);
    const bool a_ok = std::abs(got_a - alpha) <= kPhysicsTolerance * std::max(1.0, std::abs(alpha));
    if (!n_ok || !a_ok)
    {
        const int needed = std::max(default_cutoff(alpha, r), 2 * cutoff);
        throw CutoffTooSmall("squeezed-coherent state (|alpha| = " + std::to_string(std::abs(alpha)) +
                                 ", r = " + std::to_string(r) + ") is not resolved at cutoff " +
                                 std::to_string(cutoff) + "; mean photon number " + std::to_string(got_n) +
                                 " vs " + std::to_string(expected_n),
                             needed);
    }
    return state;
}

FockVector realize(const SingleModeSpec& spec, std::optional<int> cutoff)
{
    const int n = cutoff.value_or(default_cutoff(spec));
    switch (spec.kind())
    {
    case ModeKind::Vacuum:
        return build_vacuum(n);
    case ModeKind::Coherent:
        return build_coherent(spec.alpha(), n);
    case ModeKind::SqueezedCoherent:
        return build_squeezed_coherent(spec.alpha(), spec.xi(), n);
    }
    throw InvalidArgument("unknown mode kind");
}

Complex ladder_string_expectation(const FockVector& state, std::span<const Ladder> factors)
{
    if (factors.size() > kMaxLadderString)
        throw InvalidArgument("ladder string longer than " + std::to_string(kMaxLadderString));
    const auto bra = state.amplitudes();
    std::vector<Complex> ket(bra.begin(), bra.end());
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        apply_ladder(*it, ket);
    Complex acc{};
    for (std::size_t n = 0; n < ket.size(); ++n)
        acc += std::conj(bra[n]) * ket[n];
    return acc;
}

MomentTable moments(const FockVector& state)
{
    MomentTable table;
    std::vector<Ladder> factors;
    for (int p = 0; p <= 2; ++p)
    {
        for (int q = 0; q <= 2; ++q)
        {
            factors.assign(static_cast<std::size_t>(p), Ladder::Create);
            factors.insert(factors.end(), static_cast<std::size_t>(q), Ladder::Annihilate);
            table.entries[p][q] = ladder_string_expectation(state, factors);
        }
    }
    table.entries[0][0] = 1.0;
    return table;
}

double number_variance(const FockVector& state)
{
    const auto amps = state.amplitudes();
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t n = 0; n < amps.size(); ++n)
    {
        const double p = std::norm(amps[n]);
        const auto nd = static_cast<double>(n);
        m1 += nd * p;
        m2 += nd * nd * p;
    }
    return std::max(0.0, m2 - m1 * m1);
}

}  // namespace sqlo
