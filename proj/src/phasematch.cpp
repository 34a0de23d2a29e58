#include "sfwm/phasematch.hpp"

#include <cmath>
#include <sstream>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"

namespace sfwm
{

namespace
{

void validate_spec(const SellmeierModel &model, const WaveguideSpec &spec)
{
    if (spec.delta_n < 0.0)
        throw DomainError("WaveguideSpec: delta_n must be >= 0");
    if (!(spec.length > 0.0))
        throw DomainError("WaveguideSpec: length must be positive");
    if (!model.contains_wavelength(spec.pump_wavelength))
        throw DomainError("WaveguideSpec: pump wavelength outside dispersion valid range");
}

double mismatch_at(const SellmeierModel &model, double omega_p, double delta_n, double detuning)
{
    const double ws = omega_p + detuning;
    const double wi = omega_p - detuning;
    const double np = model.index_at_angular_frequency(omega_p);
    const double ns = model.index_at_angular_frequency(ws);
    const double ni = model.index_at_angular_frequency(wi);
    return (2.0 * (np + delta_n) * omega_p - ns * ws - ni * wi) / kSpeedOfLight;
}

} // namespace

double phase_mismatch(const SellmeierModel &model, const WaveguideSpec &spec, double detuning)
{
    validate_spec(model, spec);
    const double omega_p = omega_from_wavelength(spec.pump_wavelength);
    if (std::abs(detuning) >= omega_p)
        throw DomainError("phase_mismatch: |detuning| must be below the pump frequency");
    return mismatch_at(model, omega_p, spec.delta_n, detuning);
}

PhaseMatchSolution solve_phase_matching(const SellmeierModel &model, const WaveguideSpec &spec)
{
    validate_spec(model, spec);
    if (spec.delta_n == 0.0)
        throw SolverError("solve_phase_matching: delta_n = 0 admits only the degenerate root");

    const double omega_p = omega_from_wavelength(spec.pump_wavelength);
    // Largest detuning keeping both photons inside the dispersion range.
    const double omega_blue_max = omega_from_wavelength(model.lambda_min_um() * 1e-6);
    const double omega_red_min = omega_from_wavelength(model.lambda_max_um() * 1e-6);
    const double margin = 1e-9 * omega_p;
    const double detuning_max =
        std::min(omega_blue_max - omega_p, omega_p - omega_red_min) - margin;
    if (!(detuning_max > 0.0))
        throw SolverError("solve_phase_matching: pump too close to the dispersion range edge");

    // 1 nm of signal wavelength per step; cannot skip the root at these delta_n scales.
    const double step = kTwoPiC * 1e-9 / (spec.pump_wavelength * spec.pump_wavelength);

    auto f = [&](double detuning) { return mismatch_at(model, omega_p, spec.delta_n, detuning); };

    double lo = 0.0;
    double f_lo = 2.0 * spec.delta_n * omega_p / kSpeedOfLight; // exact value at degeneracy
    double hi = step;
    double f_hi = f(hi);
    while (f_hi > 0.0)
    {
        lo = hi;
        f_lo = f_hi;
        hi += step;
        if (hi >= detuning_max)
        {
            std::ostringstream os;
            os << "solve_phase_matching: no sign change of dk inside the dispersion range; "
               << "dk(" << lo << " rad/s) = " << f_lo << " 1/m, dk(" << detuning_max
               << " rad/s) = " << f(detuning_max) << " 1/m";
            throw SolverError(os.str());
        }
        f_hi = f(hi);
    }

    // Bisection; 200 halvings exhaust double precision long before hitting the cap.
    double mid = 0.5 * (lo + hi);
    double f_mid = f(mid);
    for (int iter = 0; iter < 200 && std::abs(f_mid) > kPhaseMatchTolerance; ++iter)
    {
        if (f_mid > 0.0)
            lo = mid;
        else
            hi = mid;
        mid = 0.5 * (lo + hi);
        f_mid = f(mid);
    }
    if (std::abs(f_mid) > kPhaseMatchTolerance)
        throw SolverError("solve_phase_matching: bisection stalled above residual tolerance");

    PhaseMatchSolution sol;
    sol.detuning = mid;
    sol.omega_s = omega_p + mid;
    sol.omega_i = omega_p - mid;
    sol.lambda_s = wavelength_from_omega(sol.omega_s);
    sol.lambda_i = wavelength_from_omega(sol.omega_i);
    sol.residual_k = f_mid;
    return sol;
}

std::vector<PerturbationRow> perturbation_scan(const SellmeierModel &model,
                                               const WaveguideSpec &spec,
                                               const std::vector<double> &eta_grid)
{
    validate_spec(model, spec);
    std::vector<PerturbationRow> rows;
    rows.reserve(eta_grid.size());
    for (double eta : eta_grid)
    {
        PerturbationRow row;
        row.eta = eta;
        if (eta < 0.0 || eta >= 0.5)
        {
            row.error_plus = row.error_minus = "eta outside [0, 0.5)";
            rows.push_back(row);
            continue;
        }
        for (int sign : {+1, -1})
        {
            WaveguideSpec perturbed = spec;
            perturbed.delta_n = spec.delta_n * (1.0 + sign * eta);
            auto &slot = sign > 0 ? row.plus : row.minus;
            auto &err = sign > 0 ? row.error_plus : row.error_minus;
            try
            {
                if (!(perturbed.delta_n > 0.0))
                    throw DomainError("perturbed delta_n not positive");
                slot = solve_phase_matching(model, perturbed);
            }
            catch (const std::exception &e)
            {
                err = e.what();
            }
        }
        rows.push_back(row);
    }
    return rows;
}

double infer_birefringence(const SellmeierModel &model, double lambda_p, double lambda_s,
                           double lambda_i, double wavelength_resolution)
{
    if (!(lambda_s <= lambda_p && lambda_p <= lambda_i))
        throw DomainError("infer_birefringence: expected lambda_s <= lambda_p <= lambda_i");
    for (double lam : {lambda_p, lambda_s, lambda_i})
        if (!model.contains_wavelength(lam))
            throw DomainError("infer_birefringence: wavelength outside dispersion valid range");

    // Energy consistency: the worst-case |2/lp - 1/ls - 1/li| reachable by moving
    // each input within +-resolution must cover the observed mismatch.
    const double mismatch = std::abs(2.0 / lambda_p - 1.0 / lambda_s - 1.0 / lambda_i);
    const double res = wavelength_resolution;
    const double budget = 2.0 * res / (lambda_p * lambda_p) + res / (lambda_s * lambda_s) +
                          res / (lambda_i * lambda_i);
    if (mismatch > budget)
    {
        std::ostringstream os;
        os << "infer_birefringence: energy conservation violated beyond the stated resolution ("
           << mismatch << " > " << budget << " 1/m in inverse wavelength)";
        throw DomainError(os.str());
    }

    const double omega_p = omega_from_wavelength(lambda_p);
    // Project onto the energy-conservation manifold: keep the measured detuning,
    // discard the (resolution-level) violation of omega_s + omega_i = 2 omega_p.
    const double detuning =
        0.5 * (omega_from_wavelength(lambda_s) - omega_from_wavelength(lambda_i));
    const double ws = omega_p + detuning;
    const double wi = omega_p - detuning;
    const double ns = model.index_at_angular_frequency(ws);
    const double ni = model.index_at_angular_frequency(wi);
    const double np = model.index_at_angular_frequency(omega_p);
    return (ns * ws + ni * wi - 2.0 * np * omega_p) / (2.0 * omega_p);
}

} // namespace sfwm
