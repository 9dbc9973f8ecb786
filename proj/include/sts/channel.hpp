#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sts/rng.hpp"

namespace sts {

using Cplx = std::complex<double>;

enum class ChannelModel { awgn, flat_rayleigh, pedb };

/// Time evolution of the fading process across the OFDM symbols of a block.
/// At 3 km/h / 2 GHz the Doppler (~5.56 Hz) makes the channel essentially
/// static over one subframe, so block fading is the default; the other modes
/// exist for sensitivity studies.
enum class FadingTime { block, per_symbol, gauss_markov };

/// Interference variance normalization: sigma_I^2 = 1, only the tone energy
/// scales with SIR.
inline constexpr double kInterferenceVar = 1.0;

struct ChannelConfig {
    ChannelModel model = ChannelModel::awgn;
    unsigned n_rx = 1;
    double sir_db = 0.0;   // time-domain sample signal-to-interference ratio
    unsigned s = 512;      // subcarriers per OFDM symbol
    unsigned n_sym = 14;   // OFDM symbols per block
    FadingTime fading_time = FadingTime::block;
    double doppler_hz = 5.56;  // 3 km/h at 2 GHz
    double subcarrier_spacing_hz = 15000.0;
    double energy_fraction = 1.0;  // fraction of the symbol energy on the STS tone
    /// Physical model: the interference (other users' data) is common to all
    /// antennas. The independent mode draws it per antenna instead, matching
    /// the analytic tone-present CDF exactly for N_r > 1.
    bool independent_interference = false;

    /// Received STS tone energy. The sample-level SIR definition reads
    /// SIR = (E_r / S) / sigma_I^2 under a unitary DFT, so
    /// E_r = 10^(sir_db/10) * S * sigma_I^2 * energy_fraction.
    double tone_energy() const;
};

/// Per-user channel gain tensor indexed (user, antenna, symbol, subcarrier).
/// Storage is model-aware: flat channels hold one draw per (user, antenna[,
/// symbol]); PedB holds tap gains and evaluates the frequency response on
/// demand. Immutable after generation.
class ChannelGains {
public:
    Cplx at(unsigned user, unsigned ant, unsigned sym, unsigned subcarrier) const;

    unsigned users() const { return users_; }

private:
    friend ChannelGains gen_channel(const ChannelConfig& cfg, unsigned n_users, Philox4x32& rng);

    ChannelModel model_ = ChannelModel::awgn;
    bool per_symbol_ = false;  // true when gains vary across symbols
    unsigned users_ = 0;
    unsigned n_rx_ = 1;
    unsigned n_sym_ = 1;
    unsigned s_ = 1;
    std::vector<Cplx> flat_;             // flat fading: (u, a[, n])
    std::vector<Cplx> taps_;             // pedb: (u, a[, n], tap)
    std::vector<unsigned> tap_delays_;   // pedb: delay of each tap in samples
};

/// Draws fading realizations for n_users transmitters.
///   awgn:          all gains 1
///   flat_rayleigh: one CN(0,1) per (user, antenna) block (or per symbol /
///                  Gauss-Markov evolved, per cfg.fading_time)
///   pedb:          ITU-R M.1225 Pedestrian B tapped delay line, unit total
///                  power, converted to a per-subcarrier response
ChannelGains gen_channel(const ChannelConfig& cfg, unsigned n_users, Philox4x32& rng);

/// Received per-tone samples y indexed (antenna, symbol, subcarrier).
struct ReceivedGrid {
    unsigned n_rx = 0;
    unsigned n_sym = 0;
    unsigned s = 0;
    std::vector<Cplx> samples;

    Cplx& at(unsigned ant, unsigned sym, unsigned subcarrier) {
        return samples[(static_cast<std::size_t>(ant) * n_sym + sym) * s + subcarrier];
    }
    Cplx at(unsigned ant, unsigned sym, unsigned subcarrier) const {
        return samples[(static_cast<std::size_t>(ant) * n_sym + sym) * s + subcarrier];
    }
};

/// Superposes all users' STS tones onto a fully loaded interference grid:
/// y[i,n,k] = sum_u sqrt(E_r) h[u,i,n,k] [schedule_u[n] = k] + I[n,k].
/// Interference is drawn first in a fixed (symbol, subcarrier) order, so the
/// interference component is identical whether or not users are present, and
/// common across antennas unless cfg.independent_interference is set.
/// Throws std::out_of_range when a schedule entry is not a valid subcarrier.
ReceivedGrid transmit(const std::vector<std::vector<std::uint32_t>>& tone_schedules,
                      const ChannelGains& gains, const ChannelConfig& cfg, Philox4x32& rng);

/// Time-domain samples of one OFDM symbol carrying a single tone: the
/// length-s inverse unitary DFT of a grid with sqrt(energy) at tone_index.
std::vector<Cplx> ofdm_time_domain(std::uint32_t tone_index, unsigned s, double energy);

/// 10 log10(peak sample power / mean sample power). Throws std::domain_error
/// on an empty or all-zero input.
double papr_db(const std::vector<Cplx>& samples);

/// ITU-R M.1225 Pedestrian B profile quantized to the sample grid at
/// sample_rate_hz, tap powers renormalized to sum to 1.
struct PedBProfile {
    std::vector<unsigned> delays_samples;
    std::vector<double> powers;
};
PedBProfile pedb_profile(double sample_rate_hz);

}  // namespace sts
