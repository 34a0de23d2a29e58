#ifndef SFWM_SPECTRUM_HPP
#define SFWM_SPECTRUM_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sfwm/phasematch.hpp"
#include "sfwm/sellmeier.hpp"

namespace sfwm
{

// Gaussian pump pulse described by its center and intensity FWHM in wavelength.
struct PumpEnvelope
{
    double center_wavelength = 780e-9; // m
    double bandwidth_fwhm = 2e-9;      // m, intensity FWHM
};

enum class FilterKind
{
    bandpass,
    longpass,
    shortpass
};

// Smooth spectral filter. Bandpass is a super-Gaussian of the given order;
// long/shortpass are logistic edges whose transition scale is fwhm/(2*order).
// Ideal rectangles are avoided on purpose: hard edges alias on the grid.
struct SpectralFilter
{
    double center = 0.0; // m
    double fwhm = 0.0;   // m; > 0 for bandpass, transition scale for edges
    FilterKind kind = FilterKind::bandpass;
    int order = 4;

    double intensity_transmission(double lambda_m) const;
};

struct GridSpec
{
    int n_signal = 256;
    int n_idler = 256;
    double span_pump_bandwidths = 6.0; // half-span per axis, in pump intensity FWHMs
};

// Discretized joint spectral amplitude on uniform angular-frequency grids,
// normalized so that sum |f|^2 dws dwi = 1. survival tracks the cumulative
// in-band fraction removed by filtering (heralding-efficiency penalty).
class JointSpectrum
{
public:
    JointSpectrum(std::vector<double> omega_s_grid, std::vector<double> omega_i_grid,
                  Eigen::MatrixXcd amplitude, double survival = 1.0);

    const std::vector<double> &omega_s_grid() const { return omega_s_; }
    const std::vector<double> &omega_i_grid() const { return omega_i_; }
    const Eigen::MatrixXcd &amplitude() const { return amplitude_; } // (s rows, i cols)
    double survival() const { return survival_; }

    double domega_s() const { return omega_s_[1] - omega_s_[0]; }
    double domega_i() const { return omega_i_[1] - omega_i_[0]; }

    // L2 norm under the grid measure; 1 after construction.
    double norm() const;

private:
    friend JointSpectrum apply_filters(const JointSpectrum &,
                                       const std::vector<SpectralFilter> &,
                                       const std::vector<SpectralFilter> &);
    std::vector<double> omega_s_;
    std::vector<double> omega_i_;
    Eigen::MatrixXcd amplitude_;
    double survival_;
};

// f(ws, wi) = alpha(ws + wi) sinc(dk L / 2) with alpha the two-photon (sum
// frequency) Gaussian envelope of the pump and dk evaluated with independent
// ws, wi (each pump photon at (ws + wi)/2). Grid centered on the phase-matched
// solution. Throws GridError when the ridge touches the grid boundary.
JointSpectrum build_jsa(const SellmeierModel &model, const WaveguideSpec &spec,
                        const PumpEnvelope &pump, const GridSpec &grids = {});

// Same amplitude on caller-supplied grids; lets an array of detuned sources
// share one grid so their spectra compare point by point.
JointSpectrum build_jsa_on(const SellmeierModel &model, const WaveguideSpec &spec,
                           const PumpEnvelope &pump, std::vector<double> omega_s_grid,
                           std::vector<double> omega_i_grid);

// Multiplies the amplitude transmission of each filter on its own axis and
// renormalizes; the removed fraction accumulates into survival. Throws
// DomainError when the filtered norm falls below 1e-9 of the input norm.
JointSpectrum apply_filters(const JointSpectrum &js,
                            const std::vector<SpectralFilter> &signal_chain,
                            const std::vector<SpectralFilter> &idler_chain);

enum class Arm
{
    signal,
    idler
};

// Intensity vs wavelength, ascending in wavelength, normalized to peak 1.
struct SampledSpectrum
{
    std::vector<double> wavelength; // m
    std::vector<double> intensity;  // peak = 1
};

SampledSpectrum marginal_spectrum(const JointSpectrum &js, Arm which);

// Intensity-weighted centroid over the samples at or above half maximum.
// Throws DomainError when the above-half-max region is not contiguous.
double central_wavelength(const SampledSpectrum &spectrum);

struct SchmidtResult
{
    std::vector<double> coefficients; // descending, sum = 1
    double purity = 0.0;              // sum of squares
    double schmidt_number = 0.0;      // 1 / purity
};

// Singular value decomposition of the discretized amplitude.
SchmidtResult schmidt_decompose(const JointSpectrum &js);

// Reduced spectral density matrix of one arm (trace 1), indexed on that arm's
// frequency grid. This is the heralded single-photon spectral state.
Eigen::MatrixXcd reduced_density(const JointSpectrum &js, Arm which);

} // namespace sfwm

#endif // SFWM_SPECTRUM_HPP
