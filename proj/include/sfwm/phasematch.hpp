#ifndef SFWM_PHASEMATCH_HPP
#define SFWM_PHASEMATCH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfwm/sellmeier.hpp"

namespace sfwm
{

// One source of the array: its birefringence, interaction length and pump.
// fabrication_meta is informational only (pulse energy, writing velocity, ...).
struct WaveguideSpec
{
    double delta_n = 6e-5;           // dimensionless birefringence, >= 0
    double length = 0.02;            // m
    double pump_wavelength = 780e-9; // m, inside the dispersion valid range
    std::string label;
    std::map<std::string, std::string> fabrication_meta;
};

// Nondegenerate solution of the phase-matching condition. Energy conservation
// omega_s + omega_i = 2 omega_p holds exactly by construction; lambda_s < lambda_p
// < lambda_i under normal dispersion.
struct PhaseMatchSolution
{
    double omega_s = 0.0;    // rad/s
    double omega_i = 0.0;    // rad/s
    double lambda_s = 0.0;   // m
    double lambda_i = 0.0;   // m
    double detuning = 0.0;   // rad/s, omega_s = omega_p + detuning
    double residual_k = 0.0; // 1/m, phase mismatch at the returned root
};

// Phase mismatch for the pump on the slow axis and the pair on the fast axis,
//   dk = 2 [n(w_p) + dn] w_p / c - n(w_p + W) (w_p + W) / c - n(w_p - W) (w_p - W) / c.
// The birefringence enters only the pump term.
double phase_mismatch(const SellmeierModel &model, const WaveguideSpec &spec, double detuning);

// Residual tolerance of the root finder, 1/m.
inline constexpr double kPhaseMatchTolerance = 1e-6;

// Finds the unique detuning > 0 with zero phase mismatch by scanning upward in
// steps equivalent to 1 nm of signal wavelength and bisecting the first sign
// change. Throws SolverError when delta_n == 0 (degenerate root only) or when
// no sign change exists inside the dispersion valid range.
PhaseMatchSolution solve_phase_matching(const SellmeierModel &model, const WaveguideSpec &spec);

// One perturbation-scan grid point; solutions absent where the solver failed.
struct PerturbationRow
{
    double eta = 0.0;
    std::optional<PhaseMatchSolution> plus;  // delta_n * (1 + eta)
    std::optional<PhaseMatchSolution> minus; // delta_n * (1 - eta)
    std::string error_plus;
    std::string error_minus;
};

// Solves the phase matching at delta_n (1 +- eta) for every grid value. Failed
// points are reported in the row, never dropped. Requires 0 <= eta < 0.5.
std::vector<PerturbationRow> perturbation_scan(const SellmeierModel &model,
                                               const WaveguideSpec &spec,
                                               const std::vector<double> &eta_grid);

// Closed-form inversion of the phase-matching condition for the birefringence.
// Inputs are measured central wavelengths (m). They must satisfy lambda_s <=
// lambda_p <= lambda_i and be energy-consistent within the given per-wavelength
// resolution (default 0.2 nm); the detuning is then projected onto the exact
// energy-conservation manifold before inverting.
double infer_birefringence(const SellmeierModel &model, double lambda_p, double lambda_s,
                           double lambda_i, double wavelength_resolution = 0.2e-9);

} // namespace sfwm

#endif // SFWM_PHASEMATCH_HPP
