#include "sts/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sts {

EnergyGrid combine_energy(const ReceivedGrid& grid) {
    EnergyGrid energy;
    energy.n_sym = grid.n_sym;
    energy.s = grid.s;
    energy.z.assign(static_cast<std::size_t>(grid.n_sym) * grid.s, 0.0);
    for (unsigned i = 0; i < grid.n_rx; ++i) {
        for (unsigned n = 0; n < grid.n_sym; ++n) {
            for (unsigned k = 0; k < grid.s; ++k) {
                energy.at(n, k) += std::norm(grid.at(i, n, k));
            }
        }
    }
    return energy;
}

double threshold_for_pfa(const DetectorConfig& cfg, double sigma2) {
    if (cfg.target_pfa <= 0.0 || cfg.target_pfa >= 1.0) {
        throw std::domain_error("threshold_for_pfa: P_F must be in (0, 1)");
    }
    if (sigma2 <= 0.0) throw std::domain_error("threshold_for_pfa: sigma2 must be positive");
    return -static_cast<double>(cfg.n_rx) * sigma2 * std::log(cfg.target_pfa);
}

DetectedToneSets detect(const EnergyGrid& z, double threshold) {
    if (threshold < 0.0) throw std::domain_error("detect: threshold must be nonnegative");
    DetectedToneSets detected;
    detected.sets.resize(z.n_sym);
    for (unsigned n = 0; n < z.n_sym; ++n) {
        for (unsigned k = 0; k < z.s; ++k) {
            if (z.at(n, k) >= threshold) detected.sets[n].push_back(k);
        }
    }
    return detected;
}

namespace {

// Erlang CDF with unit scale: 1 - exp(-x) sum_{k<shape} x^k / k!.
double erlang_cdf_unit(double x, unsigned shape) {
    if (x <= 0.0) return 0.0;
    double term = 1.0;
    double sum = 1.0;
    for (unsigned k = 1; k < shape; ++k) {
        term *= x / static_cast<double>(k);
        sum += term;
    }
    return 1.0 - std::exp(-x) * sum;
}

}  // namespace

double gamma_median_factor(unsigned shape) {
    if (shape == 0) throw std::domain_error("gamma_median_factor: shape must be positive");
    double lo = 0.0;
    double hi = 2.0 * shape + 10.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (erlang_cdf_unit(mid, shape) < 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double estimate_interference_power(const EnergyGrid& z, unsigned n_rx, bool common_interference) {
    if (z.z.size() < 64) {
        throw std::invalid_argument("estimate_interference_power: need at least 64 tones");
    }
    std::vector<double> values = z.z;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double median = values[mid];
    const double correction = common_interference
                                  ? static_cast<double>(n_rx) * std::log(2.0)
                                  : gamma_median_factor(n_rx);
    return median / correction;
}

double cdf_no_tone(double x, unsigned n_rx, double sigma2) {
    if (x < 0.0) throw std::domain_error("cdf_no_tone: x must be nonnegative");
    if (sigma2 <= 0.0) throw std::domain_error("cdf_no_tone: sigma2 must be positive");
    return 1.0 - std::exp(-x / (static_cast<double>(n_rx) * sigma2));
}

double cdf_tone(double x, unsigned n_rx, double sigma2, double er) {
    if (x < 0.0) throw std::domain_error("cdf_tone: x must be nonnegative");
    if (sigma2 <= 0.0) throw std::domain_error("cdf_tone: sigma2 must be positive");
    if (er < 0.0) throw std::domain_error("cdf_tone: tone energy must be nonnegative");
    return erlang_cdf_unit(x / (sigma2 + er), n_rx);
}

double p_miss(double x, unsigned n_rx, double sigma2, double er) {
    return cdf_tone(x, n_rx, sigma2, er);
}

}  // namespace sts
