#include "sfwm/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sfwm/errors.hpp"
#include "sfwm/philox.hpp"

namespace sfwm
{

void DetectionConfig::validate() const
{
    if (!(rep_rate > 0.0))
        throw DomainError("DetectionConfig: rep_rate must be positive");
    if (!(eta_signal > 0.0) || eta_signal > 1.0 || !(eta_idler > 0.0) || eta_idler > 1.0)
        throw DomainError("DetectionConfig: efficiencies must lie in (0, 1]");
    if (dark_prob < 0.0 || dark_prob > 0.01)
        throw DomainError("DetectionConfig: dark_prob must lie in [0, 0.01]");
    if (n_pulses < 1)
        throw DomainError("DetectionConfig: n_pulses must be >= 1");
}

namespace
{

// Thermal pair number from one uniform: P(n >= k) = q^k with q = tanh^2(r).
inline int draw_pair_number(double u, double q, double inv_log_q)
{
    if (u > q)
        return 0;
    const int n = static_cast<int>(std::log(u) * inv_log_q);
    return n < 1 ? 1 : n;
}

// Joint dark pattern for n_det detectors decoded from one uniform. Nonzero
// patterns occupy (0, p_any]; the common no-dark case needs no further draws.
inline uint32_t decode_dark_pattern(double u, double d, int n_det, double p_any)
{
    if (u > p_any || d == 0.0)
        return 0;
    double cum = 0.0;
    const int n_patterns = 1 << n_det;
    for (uint32_t pattern = 1; pattern < static_cast<uint32_t>(n_patterns); ++pattern)
    {
        double p = 1.0;
        for (int b = 0; b < n_det; ++b)
            p *= (pattern >> b) & 1u ? d : 1.0 - d;
        cum += p;
        if (u <= cum)
            return pattern;
    }
    return static_cast<uint32_t>(n_patterns - 1);
}

} // namespace

uint64_t derive_seed(uint64_t base_seed, uint64_t index)
{
    const auto block = Philox4x32::generate(base_seed, 0x5eedde71ULL << 16, index);
    return (static_cast<uint64_t>(block[0]) << 32) | block[1];
}

CountSummary simulate_pairs(const TmsvState &state, const DetectionConfig &cfg)
{
    cfg.validate();
    const double t = std::tanh(state.r());
    const double q = t * t;
    const double inv_log_q = q > 0.0 ? 1.0 / std::log(q) : 0.0;
    const double d = cfg.dark_prob;
    const double p_any_dark = 1.0 - (1.0 - d) * (1.0 - d);

    CountSummary out;
    out.n_pulses = cfg.n_pulses;
    out.rep_rate = cfg.rep_rate;

    for (uint64_t pulse = 0; pulse < cfg.n_pulses; ++pulse)
    {
        SubstreamRng rng_count(cfg.seed, streams::kPairsCount, pulse);
        const int n = draw_pair_number(rng_count.uniform(), q, inv_log_q);

        bool click_s = false, click_i = false;
        if (n > 0)
        {
            SubstreamRng rng_s(cfg.seed, streams::kPairsSignal, pulse);
            SubstreamRng rng_i(cfg.seed, streams::kPairsIdler, pulse);
            for (int k = 0; k < n && !click_s; ++k)
                click_s = rng_s.bernoulli(cfg.eta_signal);
            for (int k = 0; k < n && !click_i; ++k)
                click_i = rng_i.bernoulli(cfg.eta_idler);
        }
        if (d > 0.0)
        {
            SubstreamRng rng_d(cfg.seed, streams::kPairsDark, pulse);
            const uint32_t dark = decode_dark_pattern(rng_d.uniform(), d, 2, p_any_dark);
            click_s = click_s || (dark & 1u);
            click_i = click_i || (dark & 2u);
        }

        out.singles_1 += click_s;
        out.singles_i += click_i;
        out.coinc_1i += click_s && click_i;
    }
    return out;
}

CountSummary simulate_hbt(const TmsvState &state, const DetectionConfig &cfg,
                          double splitter_ratio)
{
    cfg.validate();
    if (!(splitter_ratio > 0.0) || !(splitter_ratio < 1.0))
        throw DomainError("simulate_hbt: splitter_ratio must lie in (0, 1)");

    const double t = std::tanh(state.r());
    const double q = t * t;
    const double inv_log_q = q > 0.0 ? 1.0 / std::log(q) : 0.0;
    const double d = cfg.dark_prob;
    const double p_any_dark = 1.0 - (1.0 - d) * (1.0 - d) * (1.0 - d);
    const double p_det1 = cfg.eta_signal * splitter_ratio; // photon detected at channel 1

    CountSummary out;
    out.n_pulses = cfg.n_pulses;
    out.rep_rate = cfg.rep_rate;

    for (uint64_t pulse = 0; pulse < cfg.n_pulses; ++pulse)
    {
        SubstreamRng rng_count(cfg.seed, streams::kHbtCount, pulse);
        const int n = draw_pair_number(rng_count.uniform(), q, inv_log_q);

        bool c1 = false, c2 = false, ci = false;
        if (n > 0)
        {
            SubstreamRng rng_s(cfg.seed, streams::kHbtSignal, pulse);
            SubstreamRng rng_i(cfg.seed, streams::kHbtIdler, pulse);
            for (int k = 0; k < n; ++k)
            {
                const double u = rng_s.uniform();
                if (u <= p_det1)
                    c1 = true;
                else if (u <= cfg.eta_signal)
                    c2 = true;
            }
            for (int k = 0; k < n && !ci; ++k)
                ci = rng_i.bernoulli(cfg.eta_idler);
        }
        if (d > 0.0)
        {
            SubstreamRng rng_d(cfg.seed, streams::kHbtDark, pulse);
            const uint32_t dark = decode_dark_pattern(rng_d.uniform(), d, 3, p_any_dark);
            c1 = c1 || (dark & 1u);
            c2 = c2 || (dark & 2u);
            ci = ci || (dark & 4u);
        }

        out.singles_1 += c1;
        out.singles_2 += c2;
        out.singles_i += ci;
        out.coinc_1i += c1 && ci;
        out.coinc_2i += c2 && ci;
        out.coinc_12 += c1 && c2;
        out.triples_12i += c1 && c2 && ci;
    }
    return out;
}

double g2si_estimate(const CountSummary &c)
{
    if (c.singles_1 == 0 || c.singles_i == 0)
    {
        std::ostringstream os;
        os << "g2si_estimate: zero singles (N_s=" << c.singles_1 << " N_i=" << c.singles_i << ")";
        throw EstimatorError(os.str());
    }
    return static_cast<double>(c.coinc_1i) * static_cast<double>(c.n_pulses) /
           (static_cast<double>(c.singles_1) * static_cast<double>(c.singles_i));
}

double heralded_g2_estimate(const CountSummary &c)
{
    if (c.coinc_1i == 0 || c.coinc_2i == 0)
    {
        std::ostringstream os;
        os << "heralded_g2_estimate: undefined estimator (N_1i=" << c.coinc_1i
           << " N_2i=" << c.coinc_2i << " N_i=" << c.singles_i << " N_12i=" << c.triples_12i
           << ")";
        throw EstimatorError(os.str());
    }
    return static_cast<double>(c.triples_12i) * static_cast<double>(c.singles_i) /
           (static_cast<double>(c.coinc_1i) * static_cast<double>(c.coinc_2i));
}

double heralded_g2_stat_error(const CountSummary &c)
{
    const double g2 = heralded_g2_estimate(c);
    if (c.triples_12i == 0)
        return std::numeric_limits<double>::infinity();
    const double rel2 = 1.0 / static_cast<double>(c.triples_12i) +
                        1.0 / static_cast<double>(c.singles_i) +
                        1.0 / static_cast<double>(c.coinc_1i) +
                        1.0 / static_cast<double>(c.coinc_2i);
    return g2 * std::sqrt(rel2);
}

std::vector<PowerScanRow> power_scan(const PumpCalibration &calib,
                                     const std::vector<double> &powers_mw,
                                     const DetectionConfig &cfg)
{
    std::vector<PowerScanRow> rows;
    rows.reserve(powers_mw.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (size_t k = 0; k < powers_mw.size(); ++k)
    {
        PowerScanRow row;
        row.power_mw = powers_mw[k];
        row.g2si = nan;
        row.g2h = nan;
        row.g2h_err = nan;
        try
        {
            const TmsvState state = power_to_squeezing(calib, powers_mw[k]);
            row.r = state.r();
            DetectionConfig point_cfg = cfg;
            point_cfg.seed = derive_seed(cfg.seed, k);
            const CountSummary pairs = simulate_pairs(state, point_cfg);
            row.rate_cc = pairs.rate(pairs.coinc_1i);
            const CountSummary hbt = simulate_hbt(state, point_cfg);
            try
            {
                row.g2si = g2si_estimate(pairs);
            }
            catch (const EstimatorError &)
            {
                // keep NaN; zero counts at (or near) zero power are expected
            }
            try
            {
                row.g2h = heralded_g2_estimate(hbt);
                row.g2h_err = heralded_g2_stat_error(hbt);
            }
            catch (const EstimatorError &)
            {
            }
            row.ok = true;
        }
        catch (const std::exception &e)
        {
            row.ok = false;
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace sfwm
