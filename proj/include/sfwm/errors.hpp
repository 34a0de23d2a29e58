#ifndef SFWM_ERRORS_HPP
#define SFWM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sfwm
{

// Input outside a model's physical domain (wavelength range, negative power, ...).
class DomainError : public std::domain_error
{
public:
    explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

// Root finding / scan failure (no bracket, degenerate-only solution, ...).
class SolverError : public std::runtime_error
{
public:
    explicit SolverError(const std::string &what) : std::runtime_error(what) {}
};

// Frequency grid problems: ridge not contained, disjoint supports, resampling failure.
class GridError : public std::runtime_error
{
public:
    explicit GridError(const std::string &what) : std::runtime_error(what) {}
};

// A counting estimator is undefined for the realized counts (division by zero counts).
// Carries the raw counts in the message so the caller can diagnose.
class EstimatorError : public std::runtime_error
{
public:
    explicit EstimatorError(const std::string &what) : std::runtime_error(what) {}
};

// Linear-algebra failure (SVD non-convergence) with grid diagnostics attached.
class NumericalError : public std::runtime_error
{
public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace sfwm

#endif // SFWM_ERRORS_HPP
