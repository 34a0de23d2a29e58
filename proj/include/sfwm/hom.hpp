#ifndef SFWM_HOM_HPP
#define SFWM_HOM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "sfwm/montecarlo.hpp"
#include "sfwm/spectrum.hpp"
#include "sfwm/tmsv.hpp"

namespace sfwm
{

// Delay equivalent of the 0.02 mm translation-stage step.
inline constexpr double kDefaultDelayStep = 0.02e-3 / kSpeedOfLight; // ~66.7 fs

struct HomScanConfig
{
    std::vector<double> delay_grid;        // s, symmetric about zero
    uint64_t n_pulses_per_point = 1000000; // >= 1
    double splitter_ratio = 0.5;

    // Symmetric grid of n_points (odd recommended) spaced by `step`.
    static HomScanConfig symmetric(int n_points, double step = kDefaultDelayStep);

    void validate() const;
};

struct HomSource
{
    TmsvState state;
    JointSpectrum spectrum;
};

// Tr(rho_a rho_b) for two trace-1 spectral density matrices; in [0, 1].
double spectral_overlap(const Eigen::MatrixXcd &rho_a, const Eigen::MatrixXcd &rho_b);

// Re Tr(rho_a D(tau) rho_b D(tau)^+) with D the delay phase exp(i w tau) on the
// given frequency grid. Equals spectral_overlap at tau = 0, decays to 0 for
// delays far beyond the coherence time.
double delayed_overlap(const Eigen::MatrixXcd &rho_a, const Eigen::MatrixXcd &rho_b,
                       const std::vector<double> &omega_grid, double tau);

// Heralded two-source visibility V = (P(inf) - P(0)) / P(inf) from exact Fock
// bookkeeping of the low-order pair terms: thermal pair numbers, bucket
// triggers of efficiency trigger_eff, idler loss detector_eff ahead of the
// splitter, two-photon interference weighted by the spectral overlap of the
// heralded reduced states. Requires muA, muB < 0.2 (first-order validity). The
// two spectra are resampled onto a common grid internally.
double hom_visibility_analytic(const JointSpectrum &js_a, const JointSpectrum &js_b, double mu_a,
                               double mu_b, double trigger_eff = 1.0, double detector_eff = 1.0,
                               double splitter_ratio = 0.5);

struct HomPoint
{
    double delay = 0.0;      // s
    uint64_t fourfolds = 0;  // counts at this delay
    double rate = 0.0;       // counts/s
    double fit_value = 0.0;  // fitted model counts
};

struct HomResult
{
    std::vector<HomPoint> points;
    double baseline = 0.0;    // fitted P(tau -> inf), counts per point
    double dip_minimum = 0.0; // fitted P(0), counts per point
    double visibility = 0.0;  // (baseline - minimum) / baseline
    double dip_width = 0.0;   // fitted Gaussian sigma, s
    bool negative_visibility = false;
};

// Pulse-by-pulse fourfold simulation: idlers of both sources meet at the
// splitter after loss, the surviving (1, 1) events interfere with the delayed
// spectral overlap, everything else routes independently; signal photons serve
// as triggers. Visibility comes from the fitted baseline and minimum.
HomResult hom_scan_mc(const HomSource &source_a, const HomSource &source_b,
                      const HomScanConfig &scan, const DetectionConfig &det);

struct PairVisibility
{
    int a = 0;
    int b = 0;
    double overlap = 0.0; // spectral factor M
    double visibility = 0.0;
};

// Analytic visibility per requested source pair (all unordered pairs when the
// list is empty). Reduced states are computed once per source.
std::vector<PairVisibility>
pairwise_visibility_matrix(const std::vector<HomSource> &sources,
                           const std::vector<std::pair<int, int>> &pairs = {},
                           double trigger_eff = 1.0, double detector_eff = 1.0);

namespace streams
{
inline constexpr uint32_t kHomCountA = 8;
inline constexpr uint32_t kHomCountB = 9;
inline constexpr uint32_t kHomTriggerA = 10;
inline constexpr uint32_t kHomTriggerB = 11;
inline constexpr uint32_t kHomIdlerA = 12;
inline constexpr uint32_t kHomIdlerB = 13;
inline constexpr uint32_t kHomRoute = 14;
inline constexpr uint32_t kHomDark = 15;
} // namespace streams

} // namespace sfwm

#endif // SFWM_HOM_HPP
