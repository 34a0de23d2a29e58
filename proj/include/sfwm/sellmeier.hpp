#ifndef SFWM_SELLMEIER_HPP
#define SFWM_SELLMEIER_HPP

#include <string>
#include <vector>

namespace sfwm
{

struct SellmeierTerm
{
    double b = 0.0;    // dimensionless oscillator strength, > 0
    double c_um = 0.0; // resonance wavelength, micrometers, > 0
};

// Refractive index of a transparent substrate as a Sellmeier sum,
//   n(lambda) = sqrt(1 + sum_k B_k lambda^2 / (lambda^2 - C_k^2)),  lambda in um.
// Valid strictly inside [lambda_min, lambda_max]; resonances must lie outside.
class SellmeierModel
{
public:
    SellmeierModel(std::vector<SellmeierTerm> terms, double lambda_min_um, double lambda_max_um);

    // n at a vacuum wavelength given in micrometers. Throws DomainError outside the
    // valid range and on a resonance hit.
    double refractive_index(double lambda_um) const;

    // n at an angular frequency in rad/s. Exactly refractive_index(2*pi*c/omega).
    double index_at_angular_frequency(double omega) const;

    double lambda_min_um() const { return lambda_min_um_; }
    double lambda_max_um() const { return lambda_max_um_; }
    const std::vector<SellmeierTerm> &terms() const { return terms_; }

    // True when the wavelength (meters) lies strictly inside the valid range.
    bool contains_wavelength(double lambda_m) const;

    // Built-in default: three-term fit for fused silica (Corning 7980 class).
    static SellmeierModel fused_silica();

    // Plain-text key-value file with fields B1,B2,B3,C1,C2,C3,lambda_min,lambda_max
    // (micrometer units). '#' starts a comment.
    static SellmeierModel load(const std::string &path);

private:
    std::vector<SellmeierTerm> terms_;
    double lambda_min_um_;
    double lambda_max_um_;
};

} // namespace sfwm

#endif // SFWM_SELLMEIER_HPP
