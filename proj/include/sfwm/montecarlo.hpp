#ifndef SFWM_MONTECARLO_HPP
#define SFWM_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sfwm/tmsv.hpp"

namespace sfwm
{

// Detection apparatus parameters. Coincidences are clocked per pump pulse;
// coincidence_window is retained for documentation and accidental-rate
// conversion only.
struct DetectionConfig
{
    double rep_rate = 80e6;      // pulses/s
    double eta_signal = 0.64;    // end-to-end signal efficiency, (0, 1]
    double eta_idler = 0.64;     // end-to-end idler efficiency, (0, 1]
    double dark_prob = 1.25e-6;  // per-pulse dark-count probability per detector, [0, 0.01]
    double coincidence_window = 1e-9; // s, informational at pulsed operation
    uint64_t n_pulses = 10000000;
    uint64_t seed = 20260810;

    void validate() const;
};

// Integer counts of one run. Channel 1/2 are the two signal-side detectors of
// the Hanbury-Brown-Twiss splitter; in the two-detector pair measurement the
// single signal detector occupies channel 1 and channel 2 stays zero.
struct CountSummary
{
    uint64_t n_pulses = 0;
    double rep_rate = 0.0;

    uint64_t singles_1 = 0;
    uint64_t singles_2 = 0;
    uint64_t singles_i = 0;
    uint64_t coinc_1i = 0;
    uint64_t coinc_2i = 0;
    uint64_t coinc_12 = 0;
    uint64_t triples_12i = 0;

    double rate(uint64_t counts) const
    {
        return n_pulses ? static_cast<double>(counts) * rep_rate / static_cast<double>(n_pulses)
                        : 0.0;
    }
};

// Per pulse: pair number from the TMSV photon-number law, independent binomial
// thinning on both arms, per-detector dark counts; a detector clicks when at
// least one photon or dark event survives. Deterministic for a fixed seed.
CountSummary simulate_pairs(const TmsvState &state, const DetectionConfig &cfg);

// Signal photons binomially routed onto detectors 1 and 2 behind the splitter,
// idler as the trigger; yields every count entering the heralded g2 estimator.
CountSummary simulate_hbt(const TmsvState &state, const DetectionConfig &cfg,
                          double splitter_ratio = 0.5);

// g2si = N_si N_pulses / (N_s N_i). Throws EstimatorError on zero singles.
double g2si_estimate(const CountSummary &c);

// g2H = N_12i N_i / (N_1i N_2i). Throws EstimatorError (carrying the raw
// counts) when either heralded arm count is zero.
double heralded_g2_estimate(const CountSummary &c);

// Binomial error model for the estimator above; infinite when N_12i = 0.
double heralded_g2_stat_error(const CountSummary &c);

struct PowerScanRow
{
    double power_mw = 0.0;
    double r = 0.0;
    double rate_cc = 0.0;  // coincidences per second
    double g2si = 0.0;     // NaN when undefined (no counts)
    double g2h = 0.0;      // NaN when undefined
    double g2h_err = 0.0;
    bool ok = false;
    std::string error;
};

// Runs the pair and HBT simulations at every power. Per-point failures are
// recorded in the row, never dropped. Each point uses an independent,
// deterministically derived seed.
std::vector<PowerScanRow> power_scan(const PumpCalibration &calib,
                                     const std::vector<double> &powers_mw,
                                     const DetectionConfig &cfg);

// Stream identifiers of the per-(pulse, channel) substream rule; fixed so that
// results never depend on how pulse batches are partitioned.
namespace streams
{
inline constexpr uint32_t kPairsCount = 0;
inline constexpr uint32_t kPairsSignal = 1;
inline constexpr uint32_t kPairsIdler = 2;
inline constexpr uint32_t kPairsDark = 3;
inline constexpr uint32_t kHbtCount = 4;
inline constexpr uint32_t kHbtSignal = 5;
inline constexpr uint32_t kHbtIdler = 6;
inline constexpr uint32_t kHbtDark = 7;
} // namespace streams

// Deterministic per-point seed derivation for scans.
uint64_t derive_seed(uint64_t base_seed, uint64_t index);

} // namespace sfwm

#endif // SFWM_MONTECARLO_HPP
