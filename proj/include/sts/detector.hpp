#pragma once

#include <vector>

#include "sts/channel.hpp"
#include "sts/codec.hpp"

namespace sts {

enum class Sigma2Mode { known, estimated };

struct DetectorConfig {
    double target_pfa = 0.01;  // per-tone false alarm probability
    unsigned n_rx = 1;
    Sigma2Mode sigma2_mode = Sigma2Mode::known;
    double sigma2_known = kInterferenceVar;
};

/// Combined detection energy z indexed (symbol, subcarrier).
struct EnergyGrid {
    unsigned n_sym = 0;
    unsigned s = 0;
    std::vector<double> z;

    double& at(unsigned sym, unsigned subcarrier) {
        return z[static_cast<std::size_t>(sym) * s + subcarrier];
    }
    double at(unsigned sym, unsigned subcarrier) const {
        return z[static_cast<std::size_t>(sym) * s + subcarrier];
    }
};

/// z[n,k] = sum_i |y_i[n,k]|^2 over receive antennas.
EnergyGrid combine_energy(const ReceivedGrid& grid);

/// Threshold achieving the target false alarm probability:
/// x = -N_r sigma^2 ln(P_F). Throws std::domain_error for P_F outside (0,1)
/// or nonpositive sigma2.
double threshold_for_pfa(const DetectorConfig& cfg, double sigma2);

/// sets[n] = { k : z[n,k] >= threshold }, sorted ascending.
DetectedToneSets detect(const EnergyGrid& z, double threshold);

/// Median of Gamma(shape, 1); shape = 1 gives ln 2.
double gamma_median_factor(unsigned shape);

/// Robust interference variance estimate from the median of z. STS tones are
/// sparse, so the median sees essentially only no-tone cells. Under the
/// common-interference model the no-tone energy is exponential with mean
/// N_r sigma^2 (median N_r sigma^2 ln 2); under independent interference it
/// is Erlang and the Gamma-median correction applies instead.
/// Requires at least 64 tones; throws std::invalid_argument otherwise.
double estimate_interference_power(const EnergyGrid& z, unsigned n_rx,
                                   bool common_interference = true);

/// No-tone CDF: F0(x) = 1 - exp(-x / (N_r sigma^2)).
double cdf_no_tone(double x, unsigned n_rx, double sigma2);

/// Tone-present CDF (Erlang with shape N_r, scale sigma^2 + E_r):
/// F1(x) = 1 - exp(-x/(sigma^2+E_r)) sum_{k=0}^{N_r-1} (x/(sigma^2+E_r))^k / k!.
double cdf_tone(double x, unsigned n_rx, double sigma2, double er);

/// Miss probability at threshold x: F1(x).
double p_miss(double x, unsigned n_rx, double sigma2, double er);

}  // namespace sts
