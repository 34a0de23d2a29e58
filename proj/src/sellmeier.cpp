#include "sfwm/sellmeier.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"

namespace sfwm
{

SellmeierModel::SellmeierModel(std::vector<SellmeierTerm> terms, double lambda_min_um,
                               double lambda_max_um)
    : terms_(std::move(terms)), lambda_min_um_(lambda_min_um), lambda_max_um_(lambda_max_um)
{
    if (terms_.empty())
        throw ConfigError("SellmeierModel: no terms");
    if (!(lambda_min_um_ > 0.0) || !(lambda_max_um_ > lambda_min_um_))
        throw ConfigError("SellmeierModel: invalid valid_range");
    for (const auto &t : terms_)
    {
        if (!(t.b > 0.0) || !(t.c_um > 0.0))
            throw ConfigError("SellmeierModel: B_k and C_k must be positive");
        if (t.c_um > lambda_min_um_ && t.c_um < lambda_max_um_)
            throw ConfigError("SellmeierModel: resonance inside valid_range");
    }
}

double SellmeierModel::refractive_index(double lambda_um) const
{
    if (!std::isfinite(lambda_um) || lambda_um <= lambda_min_um_ || lambda_um >= lambda_max_um_)
    {
        std::ostringstream os;
        os << "refractive_index: lambda " << lambda_um << " um outside valid range ("
           << lambda_min_um_ << ", " << lambda_max_um_ << ")";
        throw DomainError(os.str());
    }
    const double lam2 = lambda_um * lambda_um;
    double sum = 1.0;
    for (const auto &t : terms_)
    {
        const double denom = lam2 - t.c_um * t.c_um;
        if (denom == 0.0)
            throw DomainError("refractive_index: wavelength on a Sellmeier resonance");
        sum += t.b * lam2 / denom;
    }
    if (!(sum > 0.0))
        throw DomainError("refractive_index: negative n^2 (outside transparency window)");
    return std::sqrt(sum);
}

double SellmeierModel::index_at_angular_frequency(double omega) const
{
    if (!(omega > 0.0))
        throw DomainError("index_at_angular_frequency: omega must be positive");
    return refractive_index(kTwoPiC / omega * 1e6);
}

bool SellmeierModel::contains_wavelength(double lambda_m) const
{
    const double um = lambda_m * 1e6;
    return um > lambda_min_um_ && um < lambda_max_um_;
}

SellmeierModel SellmeierModel::fused_silica()
{
    return SellmeierModel({{0.6961663, 0.0684043}, {0.4079426, 0.1162414}, {0.8974794, 9.896161}},
                          0.25, 3.0);
}

SellmeierModel SellmeierModel::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("SellmeierModel::load: cannot open " + path);

    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line))
    {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            continue;
        try
        {
            kv[key] = std::stod(val);
        }
        catch (const std::exception &)
        {
            throw ConfigError("SellmeierModel::load: bad value for '" + key + "' in " + path);
        }
    }

    for (const char *req : {"B1", "B2", "B3", "C1", "C2", "C3", "lambda_min", "lambda_max"})
        if (!kv.count(req))
            throw ConfigError(std::string("SellmeierModel::load: missing field ") + req);

    return SellmeierModel({{kv["B1"], kv["C1"]}, {kv["B2"], kv["C2"]}, {kv["B3"], kv["C3"]}},
                          kv["lambda_min"], kv["lambda_max"]);
}

} // namespace sfwm
