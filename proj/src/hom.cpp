#include "sfwm/hom.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "sfwm/errors.hpp"
#include "sfwm/philox.hpp"

namespace sfwm
{

HomScanConfig HomScanConfig::symmetric(int n_points, double step)
{
    if (n_points < 3)
        throw DomainError("HomScanConfig: need at least 3 delay points");
    HomScanConfig cfg;
    cfg.delay_grid.resize(n_points);
    const double center = 0.5 * (n_points - 1);
    for (int k = 0; k < n_points; ++k)
        cfg.delay_grid[k] = (k - center) * step;
    return cfg;
}

void HomScanConfig::validate() const
{
    if (delay_grid.empty())
        throw DomainError("HomScanConfig: empty delay grid");
    if (n_pulses_per_point < 1)
        throw DomainError("HomScanConfig: n_pulses_per_point must be >= 1");
    if (!(splitter_ratio > 0.0) || !(splitter_ratio < 1.0))
        throw DomainError("HomScanConfig: splitter_ratio must lie in (0, 1)");
    // symmetric about zero: every delay must have its mirror
    for (double tau : delay_grid)
    {
        const bool found = std::any_of(delay_grid.begin(), delay_grid.end(), [&](double other) {
            return std::abs(other + tau) <= 1e-18 + 1e-9 * std::abs(tau);
        });
        if (!found)
            throw DomainError("HomScanConfig: delay grid not symmetric about zero");
    }
}

double spectral_overlap(const Eigen::MatrixXcd &rho_a, const Eigen::MatrixXcd &rho_b)
{
    const double m = (rho_a.transpose().cwiseProduct(rho_b)).sum().real();
    return std::clamp(m, 0.0, 1.0);
}

double delayed_overlap(const Eigen::MatrixXcd &rho_a, const Eigen::MatrixXcd &rho_b,
                       const std::vector<double> &omega_grid, double tau)
{
    const Eigen::Index n = rho_a.rows();
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const double phase = (omega_grid[static_cast<size_t>(k)] -
                                  omega_grid[static_cast<size_t>(j)]) *
                                 tau;
            acc += rho_a(j, k) * rho_b(k, j) * std::polar(1.0, phase);
        }
    }
    return std::clamp(acc.real(), 0.0, 1.0);
}

namespace
{

// Resamples `src` onto the target grids by bilinear interpolation; zero outside
// the source grid. Throws GridError when nothing survives (disjoint grids).
JointSpectrum resample(const JointSpectrum &src, const std::vector<double> &ws,
                       const std::vector<double> &wi)
{
    const auto &sw = src.omega_s_grid();
    const auto &si = src.omega_i_grid();
    const double s0 = sw.front(), ds = src.domega_s();
    const double i0 = si.front(), di = src.domega_i();

    Eigen::MatrixXcd out(static_cast<Eigen::Index>(ws.size()),
                         static_cast<Eigen::Index>(wi.size()));
    out.setZero();
    for (size_t a = 0; a < ws.size(); ++a)
    {
        const double xs = (ws[a] - s0) / ds;
        if (xs < 0.0 || xs > static_cast<double>(sw.size() - 1))
            continue;
        const auto a0 = static_cast<Eigen::Index>(std::min(xs, static_cast<double>(sw.size() - 2)));
        const double fs = xs - static_cast<double>(a0);
        for (size_t b = 0; b < wi.size(); ++b)
        {
            const double xi = (wi[b] - i0) / di;
            if (xi < 0.0 || xi > static_cast<double>(si.size() - 1))
                continue;
            const auto b0 =
                static_cast<Eigen::Index>(std::min(xi, static_cast<double>(si.size() - 2)));
            const double fi = xi - static_cast<double>(b0);
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                (1.0 - fs) * (1.0 - fi) * src.amplitude()(a0, b0) +
                fs * (1.0 - fi) * src.amplitude()(a0 + 1, b0) +
                (1.0 - fs) * fi * src.amplitude()(a0, b0 + 1) +
                fs * fi * src.amplitude()(a0 + 1, b0 + 1);
        }
    }
    if (!(out.squaredNorm() > 0.0))
        throw GridError("hom: grid resampling failed (disjoint spectral supports)");
    return JointSpectrum(ws, wi, std::move(out), src.survival());
}

bool grids_match(const JointSpectrum &a, const JointSpectrum &b)
{
    const auto close = [](double x, double y) {
        return std::abs(x - y) <= 1e-9 * std::max(std::abs(x), std::abs(y));
    };
    return a.omega_s_grid().size() == b.omega_s_grid().size() &&
           a.omega_i_grid().size() == b.omega_i_grid().size() &&
           close(a.omega_s_grid().front(), b.omega_s_grid().front()) &&
           close(a.omega_s_grid().back(), b.omega_s_grid().back()) &&
           close(a.omega_i_grid().front(), b.omega_i_grid().front()) &&
           close(a.omega_i_grid().back(), b.omega_i_grid().back());
}

double thermal_p(double mu, int n)
{
    return std::pow(mu / (1.0 + mu), n) / (1.0 + mu);
}

double binomial_pmf(int n, int k, double p)
{
    double c = 1.0;
    for (int j = 0; j < k; ++j)
        c *= static_cast<double>(n - j) / static_cast<double>(j + 1);
    return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

// Fourfold probability per pulse at a given two-photon overlap value. Exactly
// the generative model of hom_scan_mc with dark counts off, truncated at
// kPairCut pairs per source (thermal tail < 1e-9 of the leading term for
// mu < 0.2).
constexpr int kPairCut = 10;

double fourfold_probability(double overlap, double mu_a, double mu_b, double trigger_eff,
                            double detector_eff, double ratio)
{
    const double r1 = ratio, r2 = 1.0 - ratio;
    double total = 0.0;
    for (int na = 1; na <= kPairCut; ++na)
    {
        const double wa = thermal_p(mu_a, na) * (1.0 - std::pow(1.0 - trigger_eff, na));
        for (int nb = 1; nb <= kPairCut; ++nb)
        {
            const double wb = thermal_p(mu_b, nb) * (1.0 - std::pow(1.0 - trigger_eff, nb));
            double coince = 0.0;
            for (int ka = 0; ka <= na; ++ka)
            {
                const double pa = binomial_pmf(na, ka, detector_eff);
                for (int kb = 0; kb <= nb; ++kb)
                {
                    const double pb = binomial_pmf(nb, kb, detector_eff);
                    const int k = ka + kb;
                    double c;
                    if (ka == 1 && kb == 1)
                        c = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * overlap;
                    else if (k >= 2)
                        c = 1.0 - std::pow(r2, ka) * std::pow(r1, kb) -
                            std::pow(r1, ka) * std::pow(r2, kb);
                    else
                        c = 0.0;
                    coince += pa * pb * c;
                }
            }
            total += wa * wb * coince;
        }
    }
    return total;
}

} // namespace

double hom_visibility_analytic(const JointSpectrum &js_a, const JointSpectrum &js_b, double mu_a,
                               double mu_b, double trigger_eff, double detector_eff,
                               double splitter_ratio)
{
    if (mu_a >= 0.2 || mu_b >= 0.2)
        throw DomainError("hom_visibility_analytic: mu >= 0.2 is outside first-order validity");
    if (!(mu_a >= 0.0) || !(mu_b >= 0.0))
        throw DomainError("hom_visibility_analytic: mu must be >= 0");

    const Eigen::MatrixXcd rho_a = reduced_density(js_a, Arm::idler);
    Eigen::MatrixXcd rho_b;
    if (grids_match(js_a, js_b))
        rho_b = reduced_density(js_b, Arm::idler);
    else
        rho_b = reduced_density(resample(js_b, js_a.omega_s_grid(), js_a.omega_i_grid()),
                                Arm::idler);
    const double m = spectral_overlap(rho_a, rho_b);

    if (mu_a == 0.0 || mu_b == 0.0)
        return m; // single-pair limit: no multi-photon floor

    const double base =
        fourfold_probability(0.0, mu_a, mu_b, trigger_eff, detector_eff, splitter_ratio);
    const double dip =
        fourfold_probability(m, mu_a, mu_b, trigger_eff, detector_eff, splitter_ratio);
    return (base - dip) / base;
}

HomResult hom_scan_mc(const HomSource &source_a, const HomSource &source_b,
                      const HomScanConfig &scan, const DetectionConfig &det)
{
    scan.validate();
    det.validate();

    const Eigen::MatrixXcd rho_a = reduced_density(source_a.spectrum, Arm::idler);
    Eigen::MatrixXcd rho_b;
    const JointSpectrum *spec_b = &source_b.spectrum;
    JointSpectrum resampled = source_b.spectrum;
    if (!grids_match(source_a.spectrum, source_b.spectrum))
    {
        resampled = resample(source_b.spectrum, source_a.spectrum.omega_s_grid(),
                             source_a.spectrum.omega_i_grid());
        spec_b = &resampled;
    }
    rho_b = reduced_density(*spec_b, Arm::idler);
    const auto &omega_grid = source_a.spectrum.omega_i_grid();

    // Require the delay grid to reach at least three dip half-widths so the
    // baseline is actually a baseline.
    const double m0 = spectral_overlap(rho_a, rho_b);
    double tau_half = 0.0;
    if (m0 > 1e-12)
    {
        const double span = std::abs(scan.delay_grid.back());
        double tau = 0.0;
        const double dt = std::max(span, kDefaultDelayStep) / 4096.0;
        while (tau < 64.0 * span &&
               delayed_overlap(rho_a, rho_b, omega_grid, tau) > 0.5 * m0)
            tau += dt;
        tau_half = tau;
        const double max_delay =
            *std::max_element(scan.delay_grid.begin(), scan.delay_grid.end());
        if (max_delay < 3.0 * tau_half)
        {
            std::ostringstream os;
            os << "hom_scan_mc: delay grid half-span " << max_delay
               << " s covers less than 3 dip half-widths (" << 3.0 * tau_half << " s)";
            throw DomainError(os.str());
        }
    }

    const double qa = std::tanh(source_a.state.r()) * std::tanh(source_a.state.r());
    const double qb = std::tanh(source_b.state.r()) * std::tanh(source_b.state.r());
    const double inv_log_qa = qa > 0.0 ? 1.0 / std::log(qa) : 0.0;
    const double inv_log_qb = qb > 0.0 ? 1.0 / std::log(qb) : 0.0;
    const double d = det.dark_prob;
    const double p_any_dark = 1.0 - std::pow(1.0 - d, 4);
    const double r1 = scan.splitter_ratio, r2 = 1.0 - scan.splitter_ratio;

    HomResult result;
    result.points.resize(scan.delay_grid.size());

    for (size_t point = 0; point < scan.delay_grid.size(); ++point)
    {
        const double tau = scan.delay_grid[point];
        const double o_tau = delayed_overlap(rho_a, rho_b, omega_grid, tau);
        const double p_split = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * o_tau;

        uint64_t fourfolds = 0;
        const uint64_t base_pulse = static_cast<uint64_t>(point) * scan.n_pulses_per_point;
        for (uint64_t j = 0; j < scan.n_pulses_per_point; ++j)
        {
            const uint64_t pulse = base_pulse + j;

            SubstreamRng rng_na(det.seed, streams::kHomCountA, pulse);
            SubstreamRng rng_nb(det.seed, streams::kHomCountB, pulse);
            const double ua = rng_na.uniform();
            const double ub = rng_nb.uniform();
            const int na = ua <= qa ? std::max(1, static_cast<int>(std::log(ua) * inv_log_qa)) : 0;
            const int nb = ub <= qb ? std::max(1, static_cast<int>(std::log(ub) * inv_log_qb)) : 0;

            uint32_t dark = 0;
            if (d > 0.0)
            {
                SubstreamRng rng_d(det.seed, streams::kHomDark, pulse);
                const double udark = rng_d.uniform();
                if (udark <= p_any_dark)
                {
                    double cum = 0.0;
                    for (uint32_t pattern = 1; pattern < 16; ++pattern)
                    {
                        double p = 1.0;
                        for (int bit = 0; bit < 4; ++bit)
                            p *= (pattern >> bit) & 1u ? d : 1.0 - d;
                        cum += p;
                        if (udark <= cum)
                        {
                            dark = pattern;
                            break;
                        }
                    }
                }
            }
            if (na == 0 && nb == 0 && dark == 0)
                continue;

            // triggers (dark bits 0, 1)
            bool trig_a = dark & 1u, trig_b = dark & 2u;
            if (!trig_a && na > 0)
            {
                SubstreamRng rng(det.seed, streams::kHomTriggerA, pulse);
                trig_a = rng.uniform() <= 1.0 - std::pow(1.0 - det.eta_signal, na);
            }
            if (!trig_b && nb > 0)
            {
                SubstreamRng rng(det.seed, streams::kHomTriggerB, pulse);
                trig_b = rng.uniform() <= 1.0 - std::pow(1.0 - det.eta_signal, nb);
            }
            if (!(trig_a && trig_b))
                continue;

            // idler loss ahead of the splitter
            int ka = 0, kb = 0;
            if (na > 0)
            {
                SubstreamRng rng(det.seed, streams::kHomIdlerA, pulse);
                for (int k = 0; k < na; ++k)
                    ka += rng.bernoulli(det.eta_idler);
            }
            if (nb > 0)
            {
                SubstreamRng rng(det.seed, streams::kHomIdlerB, pulse);
                for (int k = 0; k < nb; ++k)
                    kb += rng.bernoulli(det.eta_idler);
            }

            bool d1 = dark & 4u, d2 = dark & 8u;
            if (ka == 1 && kb == 1)
            {
                SubstreamRng rng(det.seed, streams::kHomRoute, pulse);
                if (rng.uniform() <= p_split)
                {
                    d1 = d2 = true;
                }
                else
                {
                    if (rng.uniform() <= 0.5)
                        d1 = true;
                    else
                        d2 = true;
                }
            }
            else if (ka + kb > 0)
            {
                SubstreamRng rng(det.seed, streams::kHomRoute, pulse);
                for (int k = 0; k < ka; ++k)
                {
                    if (rng.uniform() <= r1)
                        d1 = true;
                    else
                        d2 = true;
                }
                for (int k = 0; k < kb; ++k)
                {
                    if (rng.uniform() <= r2)
                        d1 = true;
                    else
                        d2 = true;
                }
            }

            fourfolds += d1 && d2;
        }

        auto &pt = result.points[point];
        pt.delay = tau;
        pt.fourfolds = fourfolds;
        pt.rate = static_cast<double>(fourfolds) * det.rep_rate /
                  static_cast<double>(scan.n_pulses_per_point);
    }

    // --- Gaussian dip fit: m(tau) = B (1 - V exp(-tau^2 / (2 w^2))) ---
    const size_t n = result.points.size();
    std::vector<double> tau_abs(n);
    for (size_t k = 0; k < n; ++k)
        tau_abs[k] = std::abs(result.points[k].delay);
    std::vector<size_t> order(n);
    for (size_t k = 0; k < n; ++k)
        order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return tau_abs[x] > tau_abs[y]; });

    double outer_sum = 0.0;
    const size_t n_outer = std::max<size_t>(2, n / 3);
    for (size_t k = 0; k < n_outer; ++k)
        outer_sum += static_cast<double>(result.points[order[k]].fourfolds);
    double b0 = outer_sum / static_cast<double>(n_outer);
    if (!(b0 > 0.0))
        throw EstimatorError("hom_scan_mc: zero baseline counts, visibility undefined");

    double min_counts = static_cast<double>(result.points[0].fourfolds);
    for (const auto &pt : result.points)
        min_counts = std::min(min_counts, static_cast<double>(pt.fourfolds));
    double v0 = std::clamp(1.0 - min_counts / b0, 1e-4, 1.0);
    double w0 = tau_half > 0.0 ? tau_half / 1.177 : tau_abs[order.front()] / 6.0;
    if (!(w0 > 0.0))
        w0 = kDefaultDelayStep;

    double B = b0, V = v0, W = w0;
    double damping = 1e-3;
    for (int iter = 0; iter < 200; ++iter)
    {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (size_t k = 0; k < n; ++k)
        {
            const double t = result.points[k].delay;
            const double g = std::exp(-t * t / (2.0 * W * W));
            const double model = B * (1.0 - V * g);
            const double resid = static_cast<double>(result.points[k].fourfolds) - model;
            Eigen::Vector3d jac(1.0 - V * g, -B * g, -B * V * g * t * t / (W * W * W));
            jtj += jac * jac.transpose();
            jtr += jac * resid;
        }
        jtj.diagonal() += damping * jtj.diagonal();
        const Eigen::Vector3d delta = jtj.ldlt().solve(jtr);
        if (!delta.allFinite())
            break;
        B += delta[0];
        V += delta[1];
        W += delta[2];
        B = std::max(B, 1e-300);
        W = std::clamp(W, 1e-18, 1e6 * (tau_abs[order.front()] + kDefaultDelayStep));
        if (delta.cwiseAbs().maxCoeff() <
            1e-12 * std::max({std::abs(B), std::abs(V), std::abs(W)}))
            break;
    }

    result.baseline = B;
    result.visibility = V;
    result.dip_minimum = B * (1.0 - V);
    result.dip_width = W;
    result.negative_visibility = V < 0.0;
    for (auto &pt : result.points)
        pt.fit_value = B * (1.0 - V * std::exp(-pt.delay * pt.delay / (2.0 * W * W)));
    return result;
}

std::vector<PairVisibility>
pairwise_visibility_matrix(const std::vector<HomSource> &sources,
                           const std::vector<std::pair<int, int>> &pairs, double trigger_eff,
                           double detector_eff)
{
    if (sources.size() < 2 && pairs.empty())
        throw DomainError("pairwise_visibility_matrix: need at least 2 sources");

    std::vector<std::pair<int, int>> wanted = pairs;
    if (wanted.empty())
        for (int a = 0; a < static_cast<int>(sources.size()); ++a)
            for (int b = a + 1; b < static_cast<int>(sources.size()); ++b)
                wanted.emplace_back(a, b);

    std::vector<Eigen::MatrixXcd> rho(sources.size());
    std::vector<bool> have(sources.size(), false);
    auto rho_of = [&](int idx) -> const Eigen::MatrixXcd & {
        if (idx < 0 || idx >= static_cast<int>(sources.size()))
            throw DomainError("pairwise_visibility_matrix: source index out of range");
        if (!have[static_cast<size_t>(idx)])
        {
            const auto &ref = sources.front().spectrum;
            const auto &js = sources[static_cast<size_t>(idx)].spectrum;
            if (grids_match(ref, js))
                rho[static_cast<size_t>(idx)] = reduced_density(js, Arm::idler);
            else
                rho[static_cast<size_t>(idx)] = reduced_density(
                    resample(js, ref.omega_s_grid(), ref.omega_i_grid()), Arm::idler);
            have[static_cast<size_t>(idx)] = true;
        }
        return rho[static_cast<size_t>(idx)];
    };

    std::vector<PairVisibility> out;
    out.reserve(wanted.size());
    for (const auto &[a, b] : wanted)
    {
        const double m = spectral_overlap(rho_of(a), rho_of(b));
        const double mu_a = sources[static_cast<size_t>(a)].state.mean_pair_number();
        const double mu_b = sources[static_cast<size_t>(b)].state.mean_pair_number();
        PairVisibility pv;
        pv.a = a;
        pv.b = b;
        pv.overlap = m;
        if (mu_a == 0.0 || mu_b == 0.0)
        {
            pv.visibility = m;
        }
        else
        {
            if (mu_a >= 0.2 || mu_b >= 0.2)
                throw DomainError("pairwise_visibility_matrix: mu >= 0.2 outside validity");
            const double base = fourfold_probability(0.0, mu_a, mu_b, trigger_eff, detector_eff,
                                                     0.5);
            const double dip =
                fourfold_probability(m, mu_a, mu_b, trigger_eff, detector_eff, 0.5);
            pv.visibility = (base - dip) / base;
        }
        out.push_back(pv);
    }
    return out;
}

} // namespace sfwm
