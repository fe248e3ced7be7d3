#ifndef SQLO_OPERATORS_HPP
#define SQLO_OPERATORS_HPP

#include <compare>
#include <optional>
#include <vector>

#include "sqlo/fock.hpp"

namespace sqlo
{
/// Positive mode frequencies with designated LO and target-return modes.
///
/// `scale_g` lumps kappa * hbar / (2 eps0 V) into one constant; no observable
/// depends on those factors separately.
class ModeGrid
{
public:
    /// Throws InvalidArgument unless every frequency is positive and distinct,
    /// both indices are in range and lo_index != target_index, and g > 0.
    ModeGrid(std::vector<double> freqs, int lo_index, int target_index, double scale_g = 1.0);

    /// Grid {lo - h, lo, lo + h} (image, LO, target), or {lo, lo + h} without
    /// the image mode.
    static ModeGrid heterodyne(double omega_lo, double omega_h, bool with_image = true, double scale_g = 1.0);

    const std::vector<double>& freqs() const noexcept { return freqs_; }
    std::size_t size() const noexcept { return freqs_.size(); }
    int lo_index() const noexcept { return lo_index_; }
    int target_index() const noexcept { return target_index_; }
    double scale_g() const noexcept { return scale_g_; }
    double omega_lo() const { return freqs_[static_cast<std::size_t>(lo_index_)]; }
    double omega_target() const { return freqs_[static_cast<std::size_t>(target_index_)]; }

private:
    std::vector<double> freqs_;
    int lo_index_;
    int target_index_;
    double scale_g_;
};

/// How the outer exp(-i sign(w_l - w_k) theta_H) factor of the finite-time
/// operator is treated.
enum class PhaseConvention
{
    /// Coefficient is g sqrt(w_l w_k) times the time-average kernel only.
    KernelOnly,
    /// Kernel additionally multiplied by exp(-i sign(w_l - w_k) theta_H).
    OuterPhase
};

struct SignalOperatorSpec
{
    double omega_h = 1.0;
    double theta_h = 0.0;
    /// Integration time; empty means the tau -> infinity limit.
    std::optional<double> tau;
    /// Absolute tolerance on | |w_l - w_k| - omega_h |; defaults to 1e-9 omega_h.
    std::optional<double> pair_tolerance;
    PhaseConvention convention = PhaseConvention::KernelOnly;

    double effective_pair_tolerance() const { return pair_tolerance.value_or(1e-9 * omega_h); }
};

struct LadderOp
{
    int mode = 0;
    Ladder kind = Ladder::Annihilate;

    friend bool operator==(const LadderOp&, const LadderOp&) = default;
    friend auto operator<=>(const LadderOp&, const LadderOp&) = default;
};

using Monomial = std::vector<LadderOp>;

struct Term
{
    Complex coeff;
    Monomial monomial;
};

/// Weighted sum of ordered ladder monomials over `mode_count` modes.
class OperatorSum
{
public:
    explicit OperatorSum(std::size_t mode_count = 0) : mode_count_(mode_count) {}

    /// Throws InvalidArgument if a factor references a mode outside the range.
    void add(Complex coeff, Monomial monomial);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t mode_count() const noexcept { return mode_count_; }
    std::size_t max_degree() const noexcept;

    /// Coefficient of a^dag_l a_k (summed over duplicates), zero if absent.
    Complex pair_coefficient(int l, int k) const;

private:
    std::size_t mode_count_;
    std::vector<Term> terms_;
};

OperatorSum adjoint(const OperatorSum& op);

/// True if `op` equals its adjoint after merging identical monomials, up to
/// `rel_tol` times the largest coefficient magnitude.
bool is_hermitian(const OperatorSum& op, double rel_tol = 1e-12);

/// tau -> infinity heterodyne operator: one term per ordered pair (l, k) with
/// |w_l - w_k| = omega_h, coefficient (g/2) sqrt(w_l w_k) exp(-i sign(w_l - w_k) theta_H),
/// monomial a^dag_l a_k. Throws EmptyOperator if no pair qualifies.
OperatorSum build_signal_operator_infinite(const ModeGrid& grid, const SignalOperatorSpec& spec);

/// Zero-frequency (time-averaged current) operator: sum_k g w_k a^dag_k a_k.
OperatorSum build_sprime(const ModeGrid& grid);

/// (1/tau) int_0^tau cos(omega_h t + theta_h) exp(i (w_l - w_k) t) dt in closed form.
///
/// Both resonances are evaluated through sin(x)/x, so Delta = +-omega_h
/// needs no special casing. omega_h = 0 is accepted here. Throws
/// InvalidArgument if tau is missing, non-finite, or not positive.
Complex finite_tau_kernel(double omega_l, double omega_k, const SignalOperatorSpec& spec);

/// Finite-tau operator over every ordered pair, including l = k.
OperatorSum build_signal_operator_finite(const ModeGrid& grid, const SignalOperatorSpec& spec);

/// Dispatches on spec.tau: infinite builder when empty, finite otherwise.
OperatorSum build_signal_operator(const ModeGrid& grid, const SignalOperatorSpec& spec);

/// Formal product op * op: concatenated monomials, multiplied coefficients,
/// ordering kept as written.
OperatorSum square(const OperatorSum& op);

}  // namespace sqlo

#endif  // SQLO_OPERATORS_HPP
