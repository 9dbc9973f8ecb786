#include "sts/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sts {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// ITU-R M.1225 Pedestrian B tapped delay line.
constexpr double kPedBDelaysNs[] = {0.0, 200.0, 800.0, 1200.0, 2300.0, 3700.0};
constexpr double kPedBPowersDb[] = {0.0, -0.9, -4.9, -8.0, -7.8, -23.9};
constexpr unsigned kPedBTaps = 6;

double gauss_markov_coeff(const ChannelConfig& cfg) {
    // Jakes autocorrelation at one symbol spacing: J0(2 pi f_d T_sym).
    const double t_sym = 1.0 / cfg.subcarrier_spacing_hz;
    return std::cyl_bessel_j(0.0, 2.0 * kPi * cfg.doppler_hz * t_sym);
}

}  // namespace

double ChannelConfig::tone_energy() const {
    return std::pow(10.0, sir_db / 10.0) * static_cast<double>(s) * kInterferenceVar *
           energy_fraction;
}

PedBProfile pedb_profile(double sample_rate_hz) {
    PedBProfile profile;
    double total = 0.0;
    for (unsigned l = 0; l < kPedBTaps; ++l) {
        profile.delays_samples.push_back(
            static_cast<unsigned>(std::lround(kPedBDelaysNs[l] * 1e-9 * sample_rate_hz)));
        profile.powers.push_back(std::pow(10.0, kPedBPowersDb[l] / 10.0));
        total += profile.powers.back();
    }
    for (double& p : profile.powers) p /= total;
    return profile;
}

ChannelGains gen_channel(const ChannelConfig& cfg, unsigned n_users, Philox4x32& rng) {
    ChannelGains gains;
    gains.model_ = cfg.model;
    gains.users_ = n_users;
    gains.n_rx_ = cfg.n_rx;
    gains.n_sym_ = cfg.n_sym;
    gains.s_ = cfg.s;
    gains.per_symbol_ = cfg.fading_time != FadingTime::block;

    if (cfg.model == ChannelModel::awgn || n_users == 0) return gains;

    const unsigned sym_slots = gains.per_symbol_ ? cfg.n_sym : 1;

    if (cfg.model == ChannelModel::flat_rayleigh) {
        gains.flat_.reserve(static_cast<std::size_t>(n_users) * cfg.n_rx * sym_slots);
        for (unsigned u = 0; u < n_users; ++u) {
            for (unsigned a = 0; a < cfg.n_rx; ++a) {
                if (cfg.fading_time == FadingTime::gauss_markov) {
                    const double rho = gauss_markov_coeff(cfg);
                    const double innov = std::sqrt(std::max(0.0, 1.0 - rho * rho));
                    Cplx h = rng.next_cnormal(1.0);
                    gains.flat_.push_back(h);
                    for (unsigned n = 1; n < sym_slots; ++n) {
                        h = rho * h + innov * rng.next_cnormal(1.0);
                        gains.flat_.push_back(h);
                    }
                } else {
                    for (unsigned n = 0; n < sym_slots; ++n) {
                        gains.flat_.push_back(rng.next_cnormal(1.0));
                    }
                }
            }
        }
        return gains;
    }

    // PedB: draw tap gains, frequency response evaluated on demand.
    const PedBProfile profile = pedb_profile(cfg.s * cfg.subcarrier_spacing_hz);
    gains.tap_delays_ = profile.delays_samples;
    gains.taps_.reserve(static_cast<std::size_t>(n_users) * cfg.n_rx * sym_slots * kPedBTaps);
    for (unsigned u = 0; u < n_users; ++u) {
        for (unsigned a = 0; a < cfg.n_rx; ++a) {
            if (cfg.fading_time == FadingTime::gauss_markov) {
                const double rho = gauss_markov_coeff(cfg);
                const double innov = std::sqrt(std::max(0.0, 1.0 - rho * rho));
                std::vector<Cplx> taps(kPedBTaps);
                for (unsigned l = 0; l < kPedBTaps; ++l) {
                    taps[l] = rng.next_cnormal(profile.powers[l]);
                    gains.taps_.push_back(taps[l]);
                }
                for (unsigned n = 1; n < sym_slots; ++n) {
                    for (unsigned l = 0; l < kPedBTaps; ++l) {
                        taps[l] = rho * taps[l] + innov * rng.next_cnormal(profile.powers[l]);
                        gains.taps_.push_back(taps[l]);
                    }
                }
            } else {
                for (unsigned n = 0; n < sym_slots; ++n) {
                    for (unsigned l = 0; l < kPedBTaps; ++l) {
                        gains.taps_.push_back(rng.next_cnormal(profile.powers[l]));
                    }
                }
            }
        }
    }
    return gains;
}

Cplx ChannelGains::at(unsigned user, unsigned ant, unsigned sym, unsigned subcarrier) const {
    if (model_ == ChannelModel::awgn) return {1.0, 0.0};
    const unsigned sym_slot = per_symbol_ ? sym : 0;
    const unsigned sym_slots = per_symbol_ ? n_sym_ : 1;
    const std::size_t base = (static_cast<std::size_t>(user) * n_rx_ + ant) * sym_slots + sym_slot;

    if (model_ == ChannelModel::flat_rayleigh) return flat_[base];

    // PedB frequency response at this subcarrier.
    const Cplx* taps = taps_.data() + base * tap_delays_.size();
    Cplx h{0.0, 0.0};
    for (std::size_t l = 0; l < tap_delays_.size(); ++l) {
        const double phase = -2.0 * kPi * static_cast<double>(subcarrier) *
                             static_cast<double>(tap_delays_[l]) / static_cast<double>(s_);
        h += taps[l] * Cplx{std::cos(phase), std::sin(phase)};
    }
    return h;
}

ReceivedGrid transmit(const std::vector<std::vector<std::uint32_t>>& tone_schedules,
                      const ChannelGains& gains, const ChannelConfig& cfg, Philox4x32& rng) {
    for (const auto& schedule : tone_schedules) {
        if (schedule.size() != cfg.n_sym) {
            throw std::invalid_argument("transmit: schedule must have one tone per OFDM symbol");
        }
        for (std::uint32_t tone : schedule) {
            if (tone >= cfg.s) {
                throw std::out_of_range("transmit: tone index " + std::to_string(tone) +
                                        " exceeds subcarrier count " + std::to_string(cfg.s));
            }
        }
    }

    ReceivedGrid grid;
    grid.n_rx = cfg.n_rx;
    grid.n_sym = cfg.n_sym;
    grid.s = cfg.s;
    grid.samples.resize(static_cast<std::size_t>(cfg.n_rx) * cfg.n_sym * cfg.s);

    // Interference first, in fixed (symbol, subcarrier) order: the
    // interference component is independent of the user count.
    for (unsigned n = 0; n < cfg.n_sym; ++n) {
        for (unsigned k = 0; k < cfg.s; ++k) {
            if (cfg.independent_interference) {
                for (unsigned i = 0; i < cfg.n_rx; ++i) {
                    grid.at(i, n, k) = rng.next_cnormal(kInterferenceVar);
                }
            } else {
                const Cplx interference = rng.next_cnormal(kInterferenceVar);
                for (unsigned i = 0; i < cfg.n_rx; ++i) {
                    grid.at(i, n, k) = interference;
                }
            }
        }
    }

    const double amp = std::sqrt(cfg.tone_energy());
    for (unsigned u = 0; u < tone_schedules.size(); ++u) {
        for (unsigned n = 0; n < cfg.n_sym; ++n) {
            const std::uint32_t k = tone_schedules[u][n];
            for (unsigned i = 0; i < cfg.n_rx; ++i) {
                grid.at(i, n, k) += amp * gains.at(u, i, n, k);
            }
        }
    }
    return grid;
}

std::vector<Cplx> ofdm_time_domain(std::uint32_t tone_index, unsigned s, double energy) {
    if (tone_index >= s) {
        throw std::out_of_range("ofdm_time_domain: tone index must be below the symbol size");
    }
    std::vector<Cplx> samples(s);
    const double amp = std::sqrt(energy / static_cast<double>(s));
    for (unsigned j = 0; j < s; ++j) {
        const double phase = 2.0 * kPi * static_cast<double>(tone_index) * j / static_cast<double>(s);
        samples[j] = amp * Cplx{std::cos(phase), std::sin(phase)};
    }
    return samples;
}

double papr_db(const std::vector<Cplx>& samples) {
    if (samples.empty()) throw std::domain_error("papr_db: empty sample vector");
    double peak = 0.0;
    double total = 0.0;
    for (const Cplx& x : samples) {
        const double p = std::norm(x);
        peak = std::max(peak, p);
        total += p;
    }
    if (total == 0.0) throw std::domain_error("papr_db: all-zero sample vector");
    return 10.0 * std::log10(peak * static_cast<double>(samples.size()) / total);
}

}  // namespace sts
