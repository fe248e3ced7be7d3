#include "sqlo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "sqlo/errors.hpp"

namespace sqlo
{
namespace
{
int sign_of(double x)
{
    return (x > 0.0) - (x < 0.0);
}

double sinc(double x)
{
    return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

void require_positive_omega_h(const SignalOperatorSpec& spec)
{
    if (!(spec.omega_h > 0.0) || !std::isfinite(spec.omega_h))
        throw InvalidArgument("heterodyne frequency must be finite and > 0");
}

Monomial hop(int l, int k)
{
    return {LadderOp{l, Ladder::Create}, LadderOp{k, Ladder::Annihilate}};
}

std::map<Monomial, Complex> merged(const OperatorSum& op)
{
    std::map<Monomial, Complex> out;
    for (const auto& t : op.terms())
        out[t.monomial] += t.coeff;
    return out;
}

}  // namespace

ModeGrid::ModeGrid(std::vector<double> freqs, int lo_index, int target_index, double scale_g)
    : freqs_(std::move(freqs)), lo_index_(lo_index), target_index_(target_index), scale_g_(scale_g)
{
    const auto n = static_cast<int>(freqs_.size());
    for (std::size_t i = 0; i < freqs_.size(); ++i)
    {
        if (!(freqs_[i] > 0.0) || !std::isfinite(freqs_[i]))
            throw InvalidArgument("mode frequencies must be finite and > 0");
        for (std::size_t j = 0; j < i; ++j)
            if (freqs_[i] == freqs_[j])
                throw InvalidArgument("mode frequencies must be pairwise distinct");
    }
    if (lo_index < 0 || lo_index >= n || target_index < 0 || target_index >= n)
        throw InvalidArgument("LO/target index out of range");
    if (lo_index == target_index)
        throw InvalidArgument("LO and target must be different modes");
    if (!(scale_g > 0.0) || !std::isfinite(scale_g))
        throw InvalidArgument("scale constant g must be finite and > 0");
}

ModeGrid ModeGrid::heterodyne(double omega_lo, double omega_h, bool with_image, double scale_g)
{
    if (!(omega_h > 0.0))
        throw InvalidArgument("heterodyne frequency must be > 0");
    if (with_image)
        return ModeGrid({omega_lo - omega_h, omega_lo, omega_lo + omega_h}, 1, 2, scale_g);
    return ModeGrid({omega_lo, omega_lo + omega_h}, 0, 1, scale_g);
}

void OperatorSum::add(Complex coeff, Monomial monomial)
{
    for (const auto& f : monomial)
        if (f.mode < 0 || static_cast<std::size_t>(f.mode) >= mode_count_)
            throw InvalidArgument("monomial references mode " + std::to_string(f.mode) + " outside " +
                                  std::to_string(mode_count_) + "-mode operator");
    terms_.push_back(Term{coeff, std::move(monomial)});
}

std::size_t OperatorSum::max_degree() const noexcept
{
    std::size_t d = 0;
    for (const auto& t : terms_)
        d = std::max(d, t.monomial.size());
    return d;
}

Complex OperatorSum::pair_coefficient(int l, int k) const
{
    const Monomial key = hop(l, k);
    Complex c{};
    for (const auto& t : terms_)
        if (t.monomial == key)
            c += t.coeff;
    return c;
}

OperatorSum adjoint(const OperatorSum& op)
{
    OperatorSum out(op.mode_count());
    for (const auto& t : op.terms())
    {
        Monomial m(t.monomial.rbegin(), t.monomial.rend());
        for (auto& f : m)
            f.kind = f.kind == Ladder::Create ? Ladder::Annihilate : Ladder::Create;
        out.add(std::conj(t.coeff), std::move(m));
    }
    return out;
}

bool is_hermitian(const OperatorSum& op, double rel_tol)
{
    const auto lhs = merged(op);
    const auto rhs = merged(adjoint(op));
    double scale = 0.0;
    for (const auto& [m, c] : lhs)
        scale = std::max(scale, std::abs(c));
    const double tol = rel_tol * std::max(scale, 1e-300);
    for (const auto& [m, c] : lhs)
    {
        const auto it = rhs.find(m);
        const Complex other = it == rhs.end() ? Complex{} : it->second;
        if (std::abs(c - other) > tol)
            return false;
    }
    for (const auto& [m, c] : rhs)
        if (!lhs.contains(m) && std::abs(c) > tol)
            return false;
    return true;
}

OperatorSum build_signal_operator_infinite(const ModeGrid& grid, const SignalOperatorSpec& spec)
{
    require_positive_omega_h(spec);
    const auto& w = grid.freqs();
    const double tol = spec.effective_pair_tolerance();
    const double half_g = 0.5 * grid.scale_g();
    OperatorSum op(w.size());
    for (std::size_t l = 0; l < w.size(); ++l)
    {
        for (std::size_t k = 0; k < w.size(); ++k)
        {
            const double delta = w[l] - w[k];
            if (l == k || std::abs(std::abs(delta) - spec.omega_h) > tol)
                continue;
            const Complex phase = std::polar(1.0, -sign_of(delta) * spec.theta_h);
            op.add(half_g * std::sqrt(w[l] * w[k]) * phase, hop(static_cast<int>(l), static_cast<int>(k)));
        }
    }
    if (op.empty())
        throw EmptyOperator("no mode pair is separated by the heterodyne frequency " + std::to_string(spec.omega_h));
    return op;
}

OperatorSum build_sprime(const ModeGrid& grid)
{
    const auto& w = grid.freqs();
    OperatorSum op(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        op.add(grid.scale_g() * w[k], hop(static_cast<int>(k), static_cast<int>(k)));
    return op;
}

Complex finite_tau_kernel(double omega_l, double omega_k, const SignalOperatorSpec& spec)
{
    if (!spec.tau || !std::isfinite(*spec.tau) || !(*spec.tau > 0.0))
        throw InvalidArgument("finite-tau kernel needs a finite integration time > 0");
    const double tau = *spec.tau;
    const double delta = omega_l - omega_k;

    // (e^{i x tau} - 1) / (i x tau) = e^{i x tau / 2} sinc(x tau / 2)
    const auto averaged = [tau](double x) { return std::polar(sinc(0.5 * x * tau), 0.5 * x * tau); };
    const Complex up = std::polar(1.0, spec.theta_h) * averaged(delta + spec.omega_h);
    const Complex down = std::polar(1.0, -spec.theta_h) * averaged(delta - spec.omega_h);
    return 0.5 * (up + down);
}

OperatorSum build_signal_operator_finite(const ModeGrid& grid, const SignalOperatorSpec& spec)
{
    if (!(spec.omega_h >= 0.0) || !std::isfinite(spec.omega_h))
        throw InvalidArgument("heterodyne frequency must be finite and >= 0");
    const auto& w = grid.freqs();
    const double g = grid.scale_g();
    OperatorSum op(w.size());
    for (std::size_t l = 0; l < w.size(); ++l)
    {
        for (std::size_t k = 0; k < w.size(); ++k)
        {
            Complex coeff = g * std::sqrt(w[l] * w[k]) * finite_tau_kernel(w[l], w[k], spec);
            if (spec.convention == PhaseConvention::OuterPhase)
                coeff *= std::polar(1.0, -sign_of(w[l] - w[k]) * spec.theta_h);
            op.add(coeff, hop(static_cast<int>(l), static_cast<int>(k)));
        }
    }
    return op;
}

OperatorSum build_signal_operator(const ModeGrid& grid, const SignalOperatorSpec& spec)
{
    return spec.tau ? build_signal_operator_finite(grid, spec) : build_signal_operator_infinite(grid, spec);
}

OperatorSum square(const OperatorSum& op)
{
    OperatorSum out(op.mode_count());
    for (const auto& left : op.terms())
    {
        for (const auto& right : op.terms())
        {
            Monomial m = left.monomial;
            m.insert(m.end(), right.monomial.begin(), right.monomial.end());
            out.add(left.coeff * right.coeff, std::move(m));
        }
    }
    return out;
}

}  // namespace sqlo
