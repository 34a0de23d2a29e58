#include "sfwm/tmsv.hpp"

#include <cmath>
#include <sstream>

#include "sfwm/errors.hpp"

namespace sfwm
{

namespace
{

// Tail probability above n = N for the thermal photon-number law: q^(N+1),
// q = mu/(1+mu) = tanh^2(r).
double tail_probability(double r, int n_max)
{
    const double q = std::tanh(r) * std::tanh(r);
    if (q == 0.0)
        return 0.0;
    return std::pow(q, n_max + 1);
}

int default_truncation(double r)
{
    int n = static_cast<int>(std::ceil(20.0 + 40.0 * r));
    while (tail_probability(r, n) >= TmsvState::kTailBound)
        n += 16;
    return n;
}

} // namespace

TmsvState::TmsvState(double r) : r_(r), truncation_(0)
{
    if (!(r >= 0.0) || !std::isfinite(r))
        throw DomainError("TmsvState: r must be finite and >= 0");
    truncation_ = default_truncation(r);
}

TmsvState::TmsvState(double r, int truncation) : r_(r), truncation_(truncation)
{
    if (!(r >= 0.0) || !std::isfinite(r))
        throw DomainError("TmsvState: r must be finite and >= 0");
    if (truncation < 0)
        throw DomainError("TmsvState: truncation must be >= 0");
    if (tail_probability(r, truncation) >= kTailBound)
    {
        std::ostringstream os;
        os << "TmsvState: truncation " << truncation << " leaves tail probability "
           << tail_probability(r, truncation) << " >= " << kTailBound;
        throw DomainError(os.str());
    }
}

std::vector<double> TmsvState::fock_coefficients() const
{
    std::vector<double> c(truncation_ + 1);
    const double t = std::tanh(r_);
    double cur = 1.0 / std::cosh(r_);
    for (int n = 0; n <= truncation_; ++n)
    {
        c[n] = cur;
        cur *= t;
    }
    return c;
}

double TmsvState::mean_pair_number() const
{
    const auto c = fock_coefficients();
    double mu = 0.0;
    for (int n = truncation_; n >= 1; --n)
        mu += static_cast<double>(n) * c[n] * c[n];
    return mu;
}

double TmsvState::cross_correlation_g2si() const
{
    if (r_ == 0.0)
        throw DomainError("cross_correlation_g2si: undefined at r = 0 (zero mean)");
    const auto c = fock_coefficients();
    double mean = 0.0, second = 0.0;
    for (int n = truncation_; n >= 1; --n)
    {
        const double p = c[n] * c[n];
        mean += n * p;
        second += static_cast<double>(n) * n * p; // <n_s n_i> term: photon numbers are twinned
    }
    return second / (mean * mean);
}

double TmsvState::heralded_g2(double herald_efficiency) const
{
    if (!(herald_efficiency > 0.0) || herald_efficiency > 1.0)
        throw DomainError("heralded_g2: herald efficiency must lie in (0, 1]");
    if (r_ == 0.0)
        return 0.0;
    const auto c = fock_coefficients();
    const double miss = 1.0 - herald_efficiency;
    double p_click = 0.0, m1 = 0.0, m2 = 0.0;
    double miss_n = miss; // miss^n starting at n = 1
    for (int n = 1; n <= truncation_; ++n)
    {
        const double w = c[n] * c[n] * (1.0 - miss_n);
        p_click += w;
        m1 += n * w;
        m2 += static_cast<double>(n) * (n - 1) * w;
        miss_n *= miss;
    }
    if (m1 == 0.0)
        return 0.0;
    return m2 * p_click / (m1 * m1);
}

PumpCalibration gsi_anchored_calibration()
{
    PumpCalibration c;
    const double mu = mu_from_g2si(160.49);
    c.kappa = std::asinh(std::sqrt(mu)) / 10.0;
    return c;
}

TmsvState power_to_squeezing(const PumpCalibration &calib, double power_mw)
{
    if (!(calib.kappa > 0.0))
        throw DomainError("PumpCalibration: kappa must be positive");
    if (power_mw < calib.power_min_mw || power_mw > calib.power_max_mw)
    {
        std::ostringstream os;
        os << "power_to_squeezing: power " << power_mw << " mW outside ["
           << calib.power_min_mw << ", " << calib.power_max_mw << "]";
        throw DomainError(os.str());
    }
    return TmsvState(calib.kappa * power_mw);
}

double mu_from_g2si(double g2si)
{
    if (!(g2si > 2.0))
        throw DomainError("mu_from_g2si: ideal TMSV requires g2si > 2");
    return 1.0 / (g2si - 2.0);
}

} // namespace sfwm
