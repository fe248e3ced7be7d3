#ifndef SQLO_FOCK_HPP
#define SQLO_FOCK_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sqlo
{
using Complex = std::complex<double>;

/// Normalized single-mode state in the number basis |0>..|cutoff>.
///
/// Instances are immutable once built; the factory validates unit norm.
class FockVector
{
public:
    static constexpr double kNormTolerance = 1e-12;

    /// Wraps `amplitudes` (index = occupation number). Throws InvalidArgument
    /// if there are fewer than two entries or the norm is off by more than
    /// kNormTolerance.
    static FockVector from_amplitudes(std::vector<Complex> amplitudes);

    int cutoff() const noexcept { return static_cast<int>(amps_.size()) - 1; }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    Complex operator[](std::size_t n) const { return amps_[n]; }

    double norm_squared() const noexcept;
    double mean_photon_number() const noexcept;

private:
    explicit FockVector(std::vector<Complex> amps) : amps_(std::move(amps)) {}

    std::vector<Complex> amps_;
};

enum class ModeKind
{
    Vacuum,
    Coherent,
    SqueezedCoherent
};

/// Declarative preparation of one mode: |0>, |beta>, or D(alpha)S(xi)|0>.
class SingleModeSpec
{
public:
    static SingleModeSpec vacuum() { return SingleModeSpec(ModeKind::Vacuum, {}, {}); }
    static SingleModeSpec coherent(Complex beta) { return SingleModeSpec(ModeKind::Coherent, beta, {}); }
    static SingleModeSpec squeezed_coherent(Complex alpha, Complex xi)
    {
        return SingleModeSpec(ModeKind::SqueezedCoherent, alpha, xi);
    }

    ModeKind kind() const noexcept { return kind_; }
    Complex alpha() const noexcept { return alpha_; }
    Complex xi() const noexcept { return xi_; }

    /// Squeezing parameter r = |xi|.
    double squeeze_r() const noexcept { return std::abs(xi_); }

    /// |alpha|^2 + sinh^2(r).
    double nominal_mean_photons() const noexcept;

private:
    SingleModeSpec(ModeKind kind, Complex alpha, Complex xi) : kind_(kind), alpha_(alpha), xi_(xi) {}

    ModeKind kind_;
    Complex alpha_;
    Complex xi_;
};

/// Table of <a^dag^p a^q> for p, q in {0, 1, 2}.
struct MomentTable
{
    std::array<std::array<Complex, 3>, 3> entries{};

    Complex operator()(int p, int q) const { return entries.at(p).at(q); }
};

enum class Ladder
{
    Annihilate,
    Create
};

// Cutoff adequacy.
//
// The default cutoff is ceil(4 (|alpha| + sinh r + 1)^2). For squeezed states
// this alone leaves a heavy tail in the number distribution, so it is raised
// to at least ceil(4 (|alpha| + 1)^2) + ceil(ln(1e-12) / ln(tanh r)).
int default_cutoff(Complex alpha, double r);
int default_cutoff(const SingleModeSpec& spec);

/// Smallest N with sum_{n>N} Poisson(mean)(n) < 1e-10.
int minimal_poisson_cutoff(double mean);

/// Poisson(mean) probability mass above `cutoff`.
double poisson_tail(double mean, int cutoff);

FockVector build_vacuum(int cutoff);

/// Coherent state from the number-basis series, renormalized after
/// truncation. Throws CutoffTooSmall if the discarded Poisson tail is not
/// below 1e-10.
FockVector build_coherent(Complex beta, int cutoff);

/// D(alpha) S(xi) |0> with D = exp(alpha a^dag - alpha* a) and
/// S = exp((xi* a^2 - xi a^dag^2) / 2), both exponentiated on the truncated
/// space. The mean photon number and mean field are checked against
/// |alpha|^2 + sinh^2 r and alpha afterwards (1e-6, scaled by magnitude);
/// failure throws CutoffTooSmall.
FockVector build_squeezed_coherent(Complex alpha, Complex xi, int cutoff);

/// Realizes a spec at `cutoff`, or at default_cutoff(spec) when absent.
FockVector realize(const SingleModeSpec& spec, std::optional<int> cutoff = std::nullopt);

/// Applies `factors` as an ordered operator product (rightmost acts first)
/// and returns <psi| O |psi>. a^dag on the top retained level drops the
/// amplitude. At most kMaxLadderString factors.
inline constexpr std::size_t kMaxLadderString = 8;
Complex ladder_string_expectation(const FockVector& state, std::span<const Ladder> factors);

MomentTable moments(const FockVector& state);

/// <(a^dag a)^2> - <a^dag a>^2 from the number distribution.
double number_variance(const FockVector& state);

}  // namespace sqlo

#endif  // SQLO_FOCK_HPP
