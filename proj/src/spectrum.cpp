#include "sfwm/spectrum.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"

namespace sfwm
{

namespace
{

double sinc(double x)
{
    return x == 0.0 ? 1.0 : std::sin(x) / x;
}

double grid_norm2(const Eigen::MatrixXcd &a, double dws, double dwi)
{
    return a.squaredNorm() * dws * dwi;
}

} // namespace

double SpectralFilter::intensity_transmission(double lambda_m) const
{
    switch (kind)
    {
    case FilterKind::bandpass:
    {
        const double x = (lambda_m - center) / (0.5 * fwhm);
        double x2m = x * x;
        for (int k = 1; k < order; ++k)
            x2m *= x * x;
        return std::exp(-std::numbers::ln2 * x2m);
    }
    case FilterKind::longpass:
    case FilterKind::shortpass:
    {
        const double scale = fwhm / (2.0 * order);
        double arg = (lambda_m - center) / scale;
        if (kind == FilterKind::shortpass)
            arg = -arg;
        if (arg > 40.0)
            return 1.0;
        if (arg < -40.0)
            return 0.0;
        return 1.0 / (1.0 + std::exp(-arg));
    }
    }
    return 0.0;
}

JointSpectrum::JointSpectrum(std::vector<double> omega_s_grid, std::vector<double> omega_i_grid,
                             Eigen::MatrixXcd amplitude, double survival)
    : omega_s_(std::move(omega_s_grid)), omega_i_(std::move(omega_i_grid)),
      amplitude_(std::move(amplitude)), survival_(survival)
{
    if (omega_s_.size() < 64 || omega_i_.size() < 64)
        throw GridError("JointSpectrum: grid sizes must be >= 64 per axis");
    if (amplitude_.rows() != static_cast<Eigen::Index>(omega_s_.size()) ||
        amplitude_.cols() != static_cast<Eigen::Index>(omega_i_.size()))
        throw GridError("JointSpectrum: amplitude shape does not match the grids");
    const double n2 = grid_norm2(amplitude_, domega_s(), domega_i());
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw GridError("JointSpectrum: amplitude has zero or non-finite norm");
    amplitude_ /= std::sqrt(n2);
}

double JointSpectrum::norm() const
{
    return std::sqrt(grid_norm2(amplitude_, domega_s(), domega_i()));
}

JointSpectrum build_jsa(const SellmeierModel &model, const WaveguideSpec &spec,
                        const PumpEnvelope &pump, const GridSpec &grids)
{
    if (grids.n_signal < 64 || grids.n_idler < 64)
        throw GridError("build_jsa: grid sizes must be >= 64 per axis");
    if (!(pump.bandwidth_fwhm > 0.0))
        throw DomainError("PumpEnvelope: bandwidth_fwhm must be positive");

    WaveguideSpec pumped = spec;
    pumped.pump_wavelength = pump.center_wavelength;
    const PhaseMatchSolution sol = solve_phase_matching(model, pumped);

    const double fw_omega =
        kTwoPiC * pump.bandwidth_fwhm / (pump.center_wavelength * pump.center_wavelength);
    const double half_span = grids.span_pump_bandwidths * fw_omega;

    std::vector<double> ws(grids.n_signal), wi(grids.n_idler);
    for (int k = 0; k < grids.n_signal; ++k)
        ws[k] = sol.omega_s - half_span + 2.0 * half_span * k / (grids.n_signal - 1);
    for (int k = 0; k < grids.n_idler; ++k)
        wi[k] = sol.omega_i - half_span + 2.0 * half_span * k / (grids.n_idler - 1);

    return build_jsa_on(model, spec, pump, std::move(ws), std::move(wi));
}

JointSpectrum build_jsa_on(const SellmeierModel &model, const WaveguideSpec &spec,
                           const PumpEnvelope &pump, std::vector<double> omega_s_grid,
                           std::vector<double> omega_i_grid)
{
    if (!(pump.bandwidth_fwhm > 0.0))
        throw DomainError("PumpEnvelope: bandwidth_fwhm must be positive");
    if (omega_s_grid.size() < 64 || omega_i_grid.size() < 64)
        throw GridError("build_jsa_on: grid sizes must be >= 64 per axis");

    const double omega_p = omega_from_wavelength(pump.center_wavelength);
    // Pump intensity FWHM in angular frequency; the two-photon (autoconvolved)
    // sum-frequency envelope is exp(-(sum - 2 w_p)^2 / (8 sigma^2)).
    const double fw_omega =
        kTwoPiC * pump.bandwidth_fwhm / (pump.center_wavelength * pump.center_wavelength);
    const double sigma_intensity = fw_omega / (2.0 * std::sqrt(2.0 * std::numbers::ln2));

    const auto n_s = static_cast<Eigen::Index>(omega_s_grid.size());
    const auto n_i = static_cast<Eigen::Index>(omega_i_grid.size());
    for (double w : {omega_s_grid.front(), omega_s_grid.back(), omega_i_grid.front(),
                     omega_i_grid.back()})
        if (!model.contains_wavelength(wavelength_from_omega(w)))
            throw DomainError("build_jsa: grid extends beyond the dispersion valid range");

    Eigen::MatrixXcd f(n_s, n_i);
    const double inv_8s2 = 1.0 / (8.0 * sigma_intensity * sigma_intensity);
    for (Eigen::Index a = 0; a < n_s; ++a)
    {
        const double wsa = omega_s_grid[static_cast<size_t>(a)];
        const double ns_wsa = model.index_at_angular_frequency(wsa) * wsa;
        for (Eigen::Index b = 0; b < n_i; ++b)
        {
            const double wib = omega_i_grid[static_cast<size_t>(b)];
            const double sum = wsa + wib;
            const double wbar = 0.5 * sum;
            const double dk = (2.0 * (model.index_at_angular_frequency(wbar) + spec.delta_n) *
                                   wbar -
                               ns_wsa - model.index_at_angular_frequency(wib) * wib) /
                              kSpeedOfLight;
            const double detune = sum - 2.0 * omega_p;
            f(a, b) = std::exp(-detune * detune * inv_8s2) * sinc(0.5 * dk * spec.length);
        }
    }

    // The phase-matching ridge must peak strictly inside the grid.
    Eigen::Index max_row = 0, max_col = 0;
    f.cwiseAbs().maxCoeff(&max_row, &max_col);
    if (max_row == 0 || max_col == 0 || max_row == f.rows() - 1 || max_col == f.cols() - 1)
    {
        std::ostringstream os;
        os << "build_jsa: max |f| on the grid boundary at (" << max_row << ", " << max_col
           << "); grid too small for the phase-matching ridge";
        throw GridError(os.str());
    }

    return JointSpectrum(std::move(omega_s_grid), std::move(omega_i_grid), std::move(f));
}

JointSpectrum apply_filters(const JointSpectrum &js,
                            const std::vector<SpectralFilter> &signal_chain,
                            const std::vector<SpectralFilter> &idler_chain)
{
    const auto &ws = js.omega_s_grid();
    const auto &wi = js.omega_i_grid();

    auto axis_amplitude = [](const std::vector<double> &grid,
                             const std::vector<SpectralFilter> &chain) {
        Eigen::VectorXd t = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(grid.size()));
        for (const auto &filt : chain)
            for (size_t k = 0; k < grid.size(); ++k)
                t[static_cast<Eigen::Index>(k)] *=
                    std::sqrt(filt.intensity_transmission(wavelength_from_omega(grid[k])));
        return t;
    };

    const Eigen::VectorXd ts = axis_amplitude(ws, signal_chain);
    const Eigen::VectorXd ti = axis_amplitude(wi, idler_chain);

    Eigen::MatrixXcd filtered = ts.asDiagonal() * js.amplitude() * ti.asDiagonal();
    const double kept = grid_norm2(filtered, js.domega_s(), js.domega_i());
    // Input is normalized, so `kept` is the norm ratio squared.
    if (!(std::sqrt(kept) > 1e-9))
        throw DomainError("apply_filters: spectrum filtered to nothing (norm ratio < 1e-9)");

    JointSpectrum out(ws, wi, std::move(filtered), js.survival() * kept);
    return out;
}

SampledSpectrum marginal_spectrum(const JointSpectrum &js, Arm which)
{
    const bool signal = which == Arm::signal;
    const auto &grid = signal ? js.omega_s_grid() : js.omega_i_grid();
    const Eigen::VectorXd intensity =
        signal ? js.amplitude().cwiseAbs2().rowwise().sum().eval()
               : js.amplitude().cwiseAbs2().colwise().sum().transpose().eval();

    SampledSpectrum out;
    const size_t n = grid.size();
    out.wavelength.resize(n);
    out.intensity.resize(n);
    const double peak = intensity.maxCoeff();
    // ascending omega -> descending wavelength; flip for wavelength order
    for (size_t k = 0; k < n; ++k)
    {
        out.wavelength[k] = wavelength_from_omega(grid[n - 1 - k]);
        out.intensity[k] = intensity[static_cast<Eigen::Index>(n - 1 - k)] / peak;
    }
    return out;
}

double central_wavelength(const SampledSpectrum &spectrum)
{
    const size_t n = spectrum.intensity.size();
    if (n < 3)
        throw DomainError("central_wavelength: too few samples");
    double peak = 0.0;
    for (double v : spectrum.intensity)
        peak = std::max(peak, v);
    if (!(peak > 0.0))
        throw DomainError("central_wavelength: empty spectrum");
    const double half = 0.5 * peak;

    int regions = 0;
    bool inside = false;
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < n; ++k)
    {
        const bool above = spectrum.intensity[k] >= half;
        if (above && !inside)
            ++regions;
        inside = above;
        if (above)
        {
            num += spectrum.wavelength[k] * spectrum.intensity[k];
            den += spectrum.intensity[k];
        }
    }
    if (regions != 1)
    {
        std::ostringstream os;
        os << "central_wavelength: " << regions << " disjoint above-half-max regions";
        throw DomainError(os.str());
    }
    return num / den;
}

SchmidtResult schmidt_decompose(const JointSpectrum &js)
{
    const double scale = std::sqrt(js.domega_s() * js.domega_i());
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(js.amplitude() * scale);
    if (svd.info() != Eigen::Success)
    {
        std::ostringstream os;
        os << "schmidt_decompose: SVD failed on a " << js.amplitude().rows() << "x"
           << js.amplitude().cols() << " grid";
        throw NumericalError(os.str());
    }
    const Eigen::VectorXd sv = svd.singularValues();
    SchmidtResult res;
    res.coefficients.resize(static_cast<size_t>(sv.size()));
    double total = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        total += sv[k] * sv[k];
    double purity = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
    {
        const double lam = sv[k] * sv[k] / total;
        res.coefficients[static_cast<size_t>(k)] = lam;
        purity += lam * lam;
    }
    res.purity = purity;
    res.schmidt_number = 1.0 / purity;
    return res;
}

Eigen::MatrixXcd reduced_density(const JointSpectrum &js, Arm which)
{
    const double scale = js.domega_s() * js.domega_i();
    Eigen::MatrixXcd rho;
    if (which == Arm::idler)
        rho = js.amplitude().adjoint() * js.amplitude() * scale;
    else
        rho = js.amplitude() * js.amplitude().adjoint() * scale;
    const double tr = rho.trace().real();
    if (!(tr > 0.0))
        throw NumericalError("reduced_density: vanishing trace");
    rho /= tr;
    return rho;
}

} // namespace sfwm
