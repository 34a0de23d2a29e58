#ifndef SFWM_CHIP_HPP
#define SFWM_CHIP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sfwm/hom.hpp"
#include "sfwm/phasematch.hpp"
#include "sfwm/spectrum.hpp"
#include "sfwm/tmsv.hpp"

namespace sfwm
{

// The 128-source chip: one base waveguide plus a stored fractional
// birefringence perturbation per source, reproducible from the seed.
struct ChipModel
{
    WaveguideSpec base;
    double eta_sigma = 0.0;
    uint64_t seed = 0;
    std::vector<double> etas;            // per-source perturbation, Normal(0, eta_sigma)
    std::vector<WaveguideSpec> sources;  // delta_n = base.delta_n * (1 + eta_k)
    int redraws = 0;                     // draws rejected for nonpositive delta_n
};

// Source k gets delta_n * (1 + eta_k) with eta_k ~ Normal(0, eta_sigma) from a
// per-source substream; nonpositive results are redrawn and counted.
ChipModel build_chip(const WaveguideSpec &base, int count, double eta_sigma, uint64_t seed);

struct SourceRecord
{
    int id = 0;
    double delta_n = 0.0;
    double eta = 0.0;
    bool solved = false;
    PhaseMatchSolution solution;
    std::string error;
};

struct WavelengthHistogram
{
    double lo_nm = 0.0;
    double hi_nm = 0.0;
    std::vector<uint64_t> bins;
};

struct ArrayStatistics
{
    std::vector<SourceRecord> records; // one per source, failures listed
    int n_solved = 0;
    double mean_signal_nm = 0.0, std_signal_nm = 0.0, min_signal_nm = 0.0, max_signal_nm = 0.0;
    double mean_idler_nm = 0.0, std_idler_nm = 0.0, min_idler_nm = 0.0, max_idler_nm = 0.0;
    WavelengthHistogram hist_signal, hist_idler;
};

// Phase matching per source; per-source failures are recorded, not fatal.
ArrayStatistics chip_statistics(const SellmeierModel &model, const ChipModel &chip);

// eta_sigma that maps the solver's wavelength-vs-eta sensitivity onto the
// requested signal-arm standard deviation (default target 0.4 nm).
double calibrate_eta_sigma(const SellmeierModel &model, const WaveguideSpec &base,
                           double target_signal_std = 0.4e-9);

struct HomGroupTest
{
    int group_a = 0, group_b = 0;
    int source_a = 0, source_b = 0;
    double overlap = 0.0;
    double visibility = 0.0;
};

// Partitions the chip into n_groups contiguous blocks and runs one heralded
// two-source interference test per group count: each test samples one source
// from each of two distinct blocks and evaluates the analytic visibility. All
// sources share one frequency grid and the given filter chains; every source
// runs at the same squeezing `state`.
std::vector<HomGroupTest> sample_hom_groups(const SellmeierModel &model, const ChipModel &chip,
                                            int n_groups, uint64_t seed,
                                            const PumpEnvelope &pump,
                                            const std::vector<SpectralFilter> &signal_filters,
                                            const std::vector<SpectralFilter> &idler_filters,
                                            const TmsvState &state, const GridSpec &grids = {});

namespace streams
{
inline constexpr uint32_t kChipEta = 16;
inline constexpr uint32_t kChipGroups = 17;
} // namespace streams

} // namespace sfwm

#endif // SFWM_CHIP_HPP
