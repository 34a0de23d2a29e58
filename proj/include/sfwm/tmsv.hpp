#ifndef SFWM_TMSV_HPP
#define SFWM_TMSV_HPP

#include <vector>

namespace sfwm
{

// Two-mode squeezed vacuum |psi> = sum_n c_n |n,n> with c_n = tanh^n(r)/cosh(r).
// The Fock truncation is chosen so the neglected tail probability stays below
// kTailBound; coefficients are real nonnegative (pump phase absorbed).
class TmsvState
{
public:
    static constexpr double kTailBound = 1e-12;

    explicit TmsvState(double r);
    TmsvState(double r, int truncation); // throws if the tail bound is not met

    double r() const { return r_; }
    int truncation() const { return truncation_; }

    // c_n for n = 0..truncation.
    std::vector<double> fock_coefficients() const;

    // mu = sum_n n c_n^2; equals sinh^2(r) up to the truncation tail.
    double mean_pair_number() const;

    // <n_s n_i> / (<n_s><n_i>) from the Fock expansion. Throws DomainError at r = 0.
    double cross_correlation_g2si() const;

    // Heralded second-order correlation of the signal mode conditioned on a
    // non-number-resolving idler detection of efficiency herald_efficiency,
    // by exact Fock summation with click probability 1 - (1 - eta)^n per term.
    // Returns 0 at r = 0 (single-pair limit).
    double heralded_g2(double herald_efficiency) const;

private:
    double r_;
    int truncation_;
};

// Linear pump-power-to-squeezing map r = kappa * P.
struct PumpCalibration
{
    double kappa = 0.545 / 150.0; // 1/mW, anchored at r(150 mW) = 0.545
    double power_min_mw = 0.0;
    double power_max_mw = 200.0;
};

// kappa anchored instead at the measured cross correlation: g2si = 160.49 at 10 mW.
PumpCalibration gsi_anchored_calibration();

TmsvState power_to_squeezing(const PumpCalibration &calib, double power_mw);

// Mean pair number implied by an ideal-TMSV cross correlation, mu = 1/(g - 2).
double mu_from_g2si(double g2si);

} // namespace sfwm

#endif // SFWM_TMSV_HPP
