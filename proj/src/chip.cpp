#include "sfwm/chip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfwm/errors.hpp"
#include "sfwm/philox.hpp"

namespace sfwm
{

ChipModel build_chip(const WaveguideSpec &base, int count, double eta_sigma, uint64_t seed)
{
    if (count < 1)
        throw DomainError("build_chip: count must be >= 1");
    if (eta_sigma < 0.0 || eta_sigma > 0.2)
        throw DomainError("build_chip: eta_sigma must lie in [0, 0.2]");

    ChipModel chip;
    chip.base = base;
    chip.eta_sigma = eta_sigma;
    chip.seed = seed;
    chip.etas.reserve(count);
    chip.sources.reserve(count);

    for (int k = 0; k < count; ++k)
    {
        SubstreamRng rng(seed, streams::kChipEta, static_cast<uint64_t>(k));
        double eta = 0.0;
        for (;;)
        {
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            eta = eta_sigma * std::sqrt(-2.0 * std::log(u1)) *
                  std::cos(2.0 * std::numbers::pi * u2);
            if (1.0 + eta > 0.0)
                break;
            ++chip.redraws;
        }
        chip.etas.push_back(eta);
        WaveguideSpec source = base;
        source.delta_n = base.delta_n * (1.0 + eta);
        source.label = "wg" + std::to_string(k + 1);
        chip.sources.push_back(std::move(source));
    }
    return chip;
}

namespace
{

void fill_histogram(WavelengthHistogram &hist, const std::vector<double> &values_nm)
{
    constexpr int kBins = 16;
    hist.bins.assign(kBins, 0);
    if (values_nm.empty())
        return;
    const auto [lo_it, hi_it] = std::minmax_element(values_nm.begin(), values_nm.end());
    hist.lo_nm = *lo_it;
    hist.hi_nm = *hi_it;
    const double width = hist.hi_nm - hist.lo_nm;
    for (double v : values_nm)
    {
        int bin = width > 0.0 ? static_cast<int>((v - hist.lo_nm) / width * kBins) : 0;
        bin = std::clamp(bin, 0, kBins - 1);
        ++hist.bins[static_cast<size_t>(bin)];
    }
}

struct Moments
{
    double mean = 0.0, stdev = 0.0, min = 0.0, max = 0.0;
};

Moments moments(const std::vector<double> &v)
{
    Moments m;
    if (v.empty())
        return m;
    double sum = 0.0;
    m.min = m.max = v.front();
    for (double x : v)
    {
        sum += x;
        m.min = std::min(m.min, x);
        m.max = std::max(m.max, x);
    }
    m.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - m.mean) * (x - m.mean);
    m.stdev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return m;
}

} // namespace

ArrayStatistics chip_statistics(const SellmeierModel &model, const ChipModel &chip)
{
    ArrayStatistics stats;
    stats.records.reserve(chip.sources.size());
    std::vector<double> ls_nm, li_nm;
    for (size_t k = 0; k < chip.sources.size(); ++k)
    {
        SourceRecord rec;
        rec.id = static_cast<int>(k + 1);
        rec.delta_n = chip.sources[k].delta_n;
        rec.eta = chip.etas[k];
        try
        {
            rec.solution = solve_phase_matching(model, chip.sources[k]);
            rec.solved = true;
            ls_nm.push_back(rec.solution.lambda_s * 1e9);
            li_nm.push_back(rec.solution.lambda_i * 1e9);
        }
        catch (const std::exception &e)
        {
            rec.error = e.what();
        }
        stats.records.push_back(std::move(rec));
    }
    stats.n_solved = static_cast<int>(ls_nm.size());

    const Moments ms = moments(ls_nm);
    stats.mean_signal_nm = ms.mean;
    stats.std_signal_nm = ms.stdev;
    stats.min_signal_nm = ms.min;
    stats.max_signal_nm = ms.max;
    const Moments mi = moments(li_nm);
    stats.mean_idler_nm = mi.mean;
    stats.std_idler_nm = mi.stdev;
    stats.min_idler_nm = mi.min;
    stats.max_idler_nm = mi.max;
    fill_histogram(stats.hist_signal, ls_nm);
    fill_histogram(stats.hist_idler, li_nm);
    return stats;
}

double calibrate_eta_sigma(const SellmeierModel &model, const WaveguideSpec &base,
                           double target_signal_std)
{
    if (!(target_signal_std > 0.0))
        throw DomainError("calibrate_eta_sigma: target must be positive");
    const double h = 1e-3;
    WaveguideSpec up = base, down = base;
    up.delta_n = base.delta_n * (1.0 + h);
    down.delta_n = base.delta_n * (1.0 - h);
    const double ls_up = solve_phase_matching(model, up).lambda_s;
    const double ls_down = solve_phase_matching(model, down).lambda_s;
    const double sensitivity = std::abs(ls_up - ls_down) / (2.0 * h); // m per unit eta
    if (!(sensitivity > 0.0))
        throw SolverError("calibrate_eta_sigma: vanishing wavelength sensitivity");
    return target_signal_std / sensitivity;
}

std::vector<HomGroupTest> sample_hom_groups(const SellmeierModel &model, const ChipModel &chip,
                                            int n_groups, uint64_t seed,
                                            const PumpEnvelope &pump,
                                            const std::vector<SpectralFilter> &signal_filters,
                                            const std::vector<SpectralFilter> &idler_filters,
                                            const TmsvState &state, const GridSpec &grids)
{
    const int count = static_cast<int>(chip.sources.size());
    if (n_groups < 2)
        throw DomainError("sample_hom_groups: need at least 2 groups");
    if (count < n_groups)
        throw DomainError("sample_hom_groups: fewer sources than groups");

    // contiguous blocks of ~count/n_groups sources
    std::vector<int> block_begin(n_groups + 1);
    for (int g = 0; g <= n_groups; ++g)
        block_begin[g] = g * count / n_groups;

    // shared grid from the base spec
    const JointSpectrum base_js = build_jsa(model, chip.base, pump, grids);
    const std::vector<double> ws = base_js.omega_s_grid();
    const std::vector<double> wi = base_js.omega_i_grid();

    std::vector<HomGroupTest> tests;
    std::vector<HomSource> sampled;
    std::vector<std::pair<int, int>> pairs;
    for (int t = 0; t < n_groups; ++t)
    {
        SubstreamRng rng(seed, streams::kChipGroups, static_cast<uint64_t>(t));
        const int ga = std::min(static_cast<int>(rng.uniform() * n_groups), n_groups - 1);
        int gb = ga;
        while (gb == ga)
            gb = std::min(static_cast<int>(rng.uniform() * n_groups), n_groups - 1);

        auto pick = [&](int g) {
            const int size = block_begin[g + 1] - block_begin[g];
            return block_begin[g] + std::min(static_cast<int>(rng.uniform() * size), size - 1);
        };
        HomGroupTest test;
        test.group_a = ga;
        test.group_b = gb;
        test.source_a = pick(ga);
        test.source_b = pick(gb);

        for (int src : {test.source_a, test.source_b})
        {
            JointSpectrum js =
                build_jsa_on(model, chip.sources[static_cast<size_t>(src)], pump, ws, wi);
            if (!signal_filters.empty() || !idler_filters.empty())
                js = apply_filters(js, signal_filters, idler_filters);
            sampled.push_back(HomSource{state, std::move(js)});
        }
        pairs.emplace_back(static_cast<int>(sampled.size()) - 2,
                           static_cast<int>(sampled.size()) - 1);
        tests.push_back(test);
    }

    const auto vis = pairwise_visibility_matrix(sampled, pairs);
    for (size_t k = 0; k < tests.size(); ++k)
    {
        tests[k].overlap = vis[k].overlap;
        tests[k].visibility = vis[k].visibility;
    }
    return tests;
}

} // namespace sfwm
