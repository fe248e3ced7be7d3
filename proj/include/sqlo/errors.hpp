#ifndef SQLO_ERRORS_HPP
#define SQLO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sqlo
{
class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a truncated number basis cannot hold a state to the required
// accuracy. Carries the smallest cutoff known to be adequate.
class CutoffTooSmall : public std::runtime_error
{
public:
    CutoffTooSmall(const std::string& what, int required_cutoff)
        : std::runtime_error(what), required_cutoff_(required_cutoff)
    {
    }

    int required_cutoff() const noexcept { return required_cutoff_; }

private:
    int required_cutoff_;
};

// No mode pair of the grid is separated by the heterodyne frequency.
class EmptyOperator : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Brute-force tensor-product evaluation would exceed its memory guard.
class ResourceBound : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// SNR requested where the target-absent variance vanishes.
class UndefinedSnr : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Grid, parameters and sweep request do not describe a consistent setup.
class ConfigurationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sqlo

#endif  // SQLO_ERRORS_HPP
