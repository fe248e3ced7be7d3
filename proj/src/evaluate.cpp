#include "sqlo/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "sqlo/errors.hpp"

namespace sqlo
{
namespace
{
constexpr std::size_t kMaxMonomialDegree = 4;
constexpr double kImaginaryResidue = 1e-10;

void check_compatible(const ProductState& state, const OperatorSum& op)
{
    if (state.mode_count() != op.mode_count())
        throw InvalidArgument("state has " + std::to_string(state.mode_count()) + " modes, operator expects " +
                              std::to_string(op.mode_count()));
    if (op.max_degree() > kMaxMonomialDegree)
        throw InvalidArgument("monomial degree above " + std::to_string(kMaxMonomialDegree));
}

// Occupation tuple packed 16 bits per mode.
using Occupation = std::uint64_t;
constexpr int kBitsPerMode = 16;
constexpr int kMaxPackedModes = 64 / kBitsPerMode;

int occupation_of(Occupation key, int mode)
{
    return static_cast<int>((key >> (kBitsPerMode * mode)) & 0xFFFF);
}

Occupation with_occupation(Occupation key, int mode, int n)
{
    const Occupation mask = Occupation{0xFFFF} << (kBitsPerMode * mode);
    return (key & ~mask) | (static_cast<Occupation>(n) << (kBitsPerMode * mode));
}

using SparseState = std::unordered_map<Occupation, Complex>;

}  // namespace

ProductState::ProductState(std::vector<SingleModeSpec> specs, std::optional<int> cutoff) : specs_(std::move(specs))
{
    modes_.reserve(specs_.size());
    for (const auto& s : specs_)
        modes_.push_back(realize(s, cutoff));
}

ProductState ProductState::target_absent(const ModeGrid& grid, const SingleModeSpec& lo, std::optional<int> cutoff)
{
    std::vector<SingleModeSpec> specs(grid.size(), SingleModeSpec::vacuum());
    specs[static_cast<std::size_t>(grid.lo_index())] = lo;
    return ProductState(std::move(specs), cutoff);
}

ProductState ProductState::target_present(const ModeGrid& grid, const SingleModeSpec& lo, Complex beta,
                                          std::optional<int> cutoff)
{
    std::vector<SingleModeSpec> specs(grid.size(), SingleModeSpec::vacuum());
    specs[static_cast<std::size_t>(grid.lo_index())] = lo;
    specs[static_cast<std::size_t>(grid.target_index())] = SingleModeSpec::coherent(beta);
    return ProductState(std::move(specs), cutoff);
}

Complex expectation(const ProductState& state, const OperatorSum& op)
{
    check_compatible(state, op);
    std::vector<std::vector<Ladder>> per_mode(state.mode_count());
    Complex total{};
    for (const auto& term : op.terms())
    {
        for (auto& s : per_mode)
            s.clear();
        for (const auto& f : term.monomial)
            per_mode[static_cast<std::size_t>(f.mode)].push_back(f.kind);
        Complex value = term.coeff;
        for (std::size_t m = 0; m < per_mode.size() && value != Complex{}; ++m)
            if (!per_mode[m].empty())
                value *= ladder_string_expectation(state.mode(m), per_mode[m]);
        total += value;
    }
    return total;
}

double variance(const ProductState& state, const OperatorSum& op)
{
    if (!is_hermitian(op))
        throw InvalidArgument("variance requires a Hermitian operator");
    const Complex mean = expectation(state, op);
    const Complex second = expectation(state, square(op));
    const double scale = std::max({std::abs(second), std::norm(mean), 1e-300});
    if (std::abs(mean.imag()) > kImaginaryResidue * std::sqrt(scale) ||
        std::abs(second.imag()) > kImaginaryResidue * scale)
        throw InvalidArgument("operator moments carry an imaginary part; operator is not Hermitian in practice");
    const double var = second.real() - mean.real() * mean.real();
    if (var < -kImaginaryResidue * scale)
        throw InvalidArgument("negative variance " + std::to_string(var));
    return std::max(var, 0.0);
}

Complex brute_force_expectation(const ProductState& state, const OperatorSum& op, BruteForceLimits limits)
{
    check_compatible(state, op);
    const auto modes = static_cast<int>(state.mode_count());
    if (modes > limits.max_modes || modes > kMaxPackedModes)
        throw ResourceBound("brute-force oracle limited to " + std::to_string(limits.max_modes) + " modes");
    for (int m = 0; m < modes; ++m)
        if (state.mode(static_cast<std::size_t>(m)).cutoff() > std::min(limits.max_cutoff, 0xFFFF))
            throw ResourceBound("brute-force oracle limited to cutoff " + std::to_string(limits.max_cutoff));
    if (op.empty())
        return {};

    // Full tensor product, skipping exact zeros.
    SparseState psi{{Occupation{0}, Complex{1.0}}};
    for (int m = 0; m < modes; ++m)
    {
        const auto amps = state.mode(static_cast<std::size_t>(m)).amplitudes();
        SparseState next;
        next.reserve(psi.size() * amps.size());
        for (const auto& [key, value] : psi)
            for (std::size_t n = 0; n < amps.size(); ++n)
                if (amps[n] != Complex{})
                    next.emplace(with_occupation(key, m, static_cast<int>(n)), value * amps[n]);
        psi = std::move(next);
    }

    Complex total{};
    for (const auto& term : op.terms())
    {
        SparseState phi = psi;
        for (auto f = term.monomial.rbegin(); f != term.monomial.rend(); ++f)
        {
            const int top = state.mode(static_cast<std::size_t>(f->mode)).cutoff();
            SparseState moved;
            moved.reserve(phi.size());
            for (const auto& [key, value] : phi)
            {
                const int n = occupation_of(key, f->mode);
                if (f->kind == Ladder::Annihilate)
                {
                    if (n == 0)
                        continue;
                    moved[with_occupation(key, f->mode, n - 1)] += std::sqrt(static_cast<double>(n)) * value;
                }
                else
                {
                    if (n == top)
                        continue;
                    moved[with_occupation(key, f->mode, n + 1)] += std::sqrt(static_cast<double>(n + 1)) * value;
                }
            }
            phi = std::move(moved);
        }
        Complex overlap{};
        for (const auto& [key, value] : phi)
        {
            const auto it = psi.find(key);
            if (it != psi.end())
                overlap += std::conj(it->second) * value;
        }
        total += term.coeff * overlap;
    }
    return total;
}

}  // namespace sqlo
