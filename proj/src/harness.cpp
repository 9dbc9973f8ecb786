#include "sts/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "sts/rng.hpp"

namespace sts {

namespace {

constexpr std::uint32_t kLaneInterference = 0;
constexpr std::uint32_t kLaneChannel = 1;
constexpr std::uint32_t kLaneMessage = 2;
// Calibration runs live in their own point-id namespace so they never share
// streams with measurement trials.
constexpr std::uint32_t kCalibrationPoint = 0x800000u;

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(acc, trial) for trial in [0, n_trials) across worker threads.
/// Accumulators hold integer counters only and merge commutatively, so the
/// result does not depend on the thread count or work split.
template <typename Acc, typename TrialFn>
Acc accumulate_trials(unsigned threads, std::uint64_t n_trials, TrialFn&& fn) {
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(n_trials, 1)));
    if (threads <= 1) {
        Acc acc{};
        for (std::uint64_t t = 0; t < n_trials; ++t) fn(acc, t);
        return acc;
    }
    std::vector<Acc> partial(threads);
    std::atomic<std::uint64_t> cursor{0};
    const std::uint64_t chunk = std::max<std::uint64_t>(1, n_trials / (threads * 16u));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                const std::uint64_t begin = cursor.fetch_add(chunk);
                if (begin >= n_trials) break;
                const std::uint64_t end = std::min(begin + chunk, n_trials);
                for (std::uint64_t t = begin; t < end; ++t) fn(partial[w], t);
            }
        });
    }
    for (auto& th : pool) th.join();
    Acc acc{};
    for (const Acc& p : partial) acc += p;
    return acc;
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double safe_ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt_g(values[i]);
    }
    return out;
}

std::string join_unsigned(const std::vector<unsigned>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

const char* channel_model_name(ChannelModel model) {
    switch (model) {
        case ChannelModel::awgn: return "awgn";
        case ChannelModel::flat_rayleigh: return "flat_rayleigh";
        case ChannelModel::pedb: return "pedb";
    }
    return "?";
}

const char* fading_time_name(FadingTime ft) {
    switch (ft) {
        case FadingTime::block: return "block";
        case FadingTime::per_symbol: return "per_symbol";
        case FadingTime::gauss_markov: return "gauss_markov";
    }
    return "?";
}

void validate_common(const ExperimentConfig& cfg) {
    if (cfg.sir_points_db.empty()) throw std::invalid_argument("config: sir_db list is empty");
    if (cfg.nrx_list.empty()) throw std::invalid_argument("config: nrx list is empty");
    if (cfg.trials_per_point == 0) throw std::invalid_argument("config: trials must be >= 1");
    for (unsigned nrx : cfg.nrx_list) {
        if (nrx == 0) throw std::invalid_argument("config: nrx must be >= 1");
    }
    if (cfg.channel.s == 0 || cfg.channel.n_sym == 0) {
        throw std::invalid_argument("config: subcarriers and symbols must be >= 1");
    }
    if (cfg.detector.target_pfa <= 0.0 || cfg.detector.target_pfa >= 1.0) {
        throw std::invalid_argument("config: pfa must be in (0, 1)");
    }
}

std::vector<std::string> common_metadata(const ExperimentConfig& cfg, const ChannelConfig& ch) {
    std::vector<std::string> meta;
    meta.push_back(std::string("experiment: ") + (cfg.experiment == ExperimentKind::miss_detection
                                                      ? "miss_detection"
                                                      : "multiuser_decode"));
    meta.push_back("seed: " + std::to_string(cfg.seed));
    meta.push_back("trials_per_point: " + std::to_string(cfg.trials_per_point));
    meta.push_back("sir_points_db: " + join_doubles(cfg.sir_points_db));
    meta.push_back("n_rx: " + join_unsigned(cfg.nrx_list));
    meta.push_back(std::string("channel: ") + channel_model_name(ch.model) +
                   " (fading_time: " + fading_time_name(ch.fading_time) + ")");
    meta.push_back("subcarriers: " + std::to_string(ch.s) +
                   "; symbols_per_block: " + std::to_string(ch.n_sym));
    meta.push_back(std::string("interference: ") +
                   (ch.independent_interference ? "independent per antenna" : "common across antennas") +
                   "; sigma_I^2 = " + fmt_g(kInterferenceVar));
    meta.push_back("sir_definition: sample-level SIR = (E_r/S)/sigma_I^2; "
                   "E_r = 10^(sir_db/10) * S * energy_fraction");
    meta.push_back("energy_fraction: " + fmt_g(ch.energy_fraction));
    meta.push_back("detector: target_pfa = " + fmt_g(cfg.detector.target_pfa) + "; sigma2_mode = " +
                   (cfg.detector.sigma2_mode == Sigma2Mode::known ? "known" : "estimated"));
    return meta;
}

struct MissAcc {
    std::uint64_t tone_decisions = 0;
    std::uint64_t misses = 0;
    std::uint64_t noise_decisions = 0;
    std::uint64_t false_alarms = 0;

    MissAcc& operator+=(const MissAcc& o) {
        tone_decisions += o.tone_decisions;
        misses += o.misses;
        noise_decisions += o.noise_decisions;
        false_alarms += o.false_alarms;
        return *this;
    }
};

struct MultiAcc {
    std::uint64_t users_total = 0;
    std::uint64_t correct = 0;
    std::uint64_t erasure = 0;
    std::uint64_t error = 0;
    std::uint64_t collision = 0;
    std::uint64_t spurious = 0;

    MultiAcc& operator+=(const MultiAcc& o) {
        users_total += o.users_total;
        correct += o.correct;
        erasure += o.erasure;
        error += o.error;
        collision += o.collision;
        spurious += o.spurious;
        return *this;
    }
};

/// Draws one multiuser trial and returns the truth messages plus detected
/// tone sets (exact tones under perfect detection, full channel + detector
/// pipeline otherwise).
void multiuser_trial(const ExperimentConfig& cfg, const ChannelConfig& ch,
                     const DetectorConfig& det, const ListDecoder& decoder, std::uint32_t point,
                     std::uint64_t trial, std::vector<std::uint64_t>& truth,
                     DetectedToneSets& detected) {
    const CodeParams& params = decoder.params();
    const std::uint64_t count = params.codeword_count();

    Philox4x32 msg_rng(cfg.seed, derive_stream(point, static_cast<std::uint32_t>(trial), kLaneMessage));
    truth.clear();
    for (unsigned u = 0; u < cfg.n_users; ++u) truth.push_back(msg_rng.uniform_below(count));

    if (cfg.perfect_detection) {
        detected.sets.assign(params.n, {});
        for (unsigned n = 0; n < params.n; ++n) {
            auto& set = detected.sets[n];
            for (std::uint64_t msg : truth) set.push_back(decoder.codeword(msg)[n]);
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
        }
        return;
    }

    std::vector<std::vector<std::uint32_t>> schedules(truth.size());
    for (std::size_t u = 0; u < truth.size(); ++u) {
        const GfElem* cw = decoder.codeword(truth[u]);
        schedules[u].assign(cw, cw + params.n);
    }

    Philox4x32 chan_rng(cfg.seed, derive_stream(point, static_cast<std::uint32_t>(trial), kLaneChannel));
    const ChannelGains gains = gen_channel(ch, static_cast<unsigned>(truth.size()), chan_rng);
    Philox4x32 intf_rng(cfg.seed,
                        derive_stream(point, static_cast<std::uint32_t>(trial), kLaneInterference));
    const ReceivedGrid grid = transmit(schedules, gains, ch, intf_rng);
    const EnergyGrid energy = combine_energy(grid);

    const double sigma2 = det.sigma2_mode == Sigma2Mode::known
                              ? det.sigma2_known
                              : estimate_interference_power(energy, ch.n_rx,
                                                            !ch.independent_interference);
    detected = detect(energy, threshold_for_pfa(det, sigma2));
}

unsigned calibrate_theta_impl(const ExperimentConfig& cfg, const ListDecoder& decoder,
                              const ChannelConfig& ch_base, unsigned nrx) {
    const unsigned n = decoder.params().n;
    ChannelConfig ch = ch_base;
    ch.n_rx = nrx;
    ch.sir_db = *std::min_element(cfg.sir_points_db.begin(), cfg.sir_points_db.end());
    DetectorConfig det = cfg.detector;
    det.n_rx = nrx;

    const std::uint32_t point = kCalibrationPoint | nrx;
    const std::uint64_t trials = std::min<std::uint64_t>(cfg.trials_per_point, 1000);

    struct SweepAcc {
        std::vector<std::uint64_t> errors;  // indexed by theta - 1
        std::uint64_t users = 0;

        SweepAcc& operator+=(const SweepAcc& o) {
            if (o.errors.empty()) return *this;
            if (errors.empty()) errors.assign(o.errors.size(), 0);
            for (std::size_t i = 0; i < errors.size(); ++i) errors[i] += o.errors[i];
            users += o.users;
            return *this;
        }
    };

    const SweepAcc sweep = accumulate_trials<SweepAcc>(
        cfg.threads, trials, [&](SweepAcc& acc, std::uint64_t t) {
            if (acc.errors.empty()) acc.errors.assign(n, 0);
            std::vector<std::uint64_t> truth;
            DetectedToneSets detected;
            multiuser_trial(cfg, ch, det, decoder, point, t, truth, detected);
            const auto candidates = decoder.decode(detected, 1);
            std::vector<std::uint64_t> decoded;
            for (unsigned theta = 1; theta <= n; ++theta) {
                decoded.clear();
                for (const auto& c : candidates) {
                    if (c.score >= theta) decoded.push_back(c.index);
                }
                const OutcomeTally tally = tally_outcomes(decoded, truth);
                acc.errors[theta - 1] += tally.error;
                if (theta == 1) acc.users += tally.users;
            }
        });

    // Smallest theta keeping the per-user error rate strictly below 1%.
    for (unsigned theta = 1; theta <= n; ++theta) {
        const double rate = safe_ratio(sweep.errors[theta - 1], sweep.users);
        if (rate < 0.01) return theta;
    }
    return n;
}

}  // namespace

std::vector<UserOutcome> classify_outcome(const std::vector<std::uint64_t>& decoded,
                                          const std::vector<std::uint64_t>& truth) {
    std::unordered_map<std::uint64_t, unsigned> truth_mult;
    for (std::uint64_t v : truth) ++truth_mult[v];
    const std::unordered_set<std::uint64_t> decoded_set(decoded.begin(), decoded.end());

    std::uint64_t spurious_budget = 0;
    for (std::uint64_t v : decoded_set) {
        if (truth_mult.find(v) == truth_mult.end()) ++spurious_budget;
    }

    std::vector<UserOutcome> labels(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth_mult[truth[i]] > 1) {
            labels[i] = UserOutcome::collision;
        } else if (decoded_set.count(truth[i])) {
            labels[i] = UserOutcome::correct;
        } else if (spurious_budget > 0) {
            labels[i] = UserOutcome::error;
            --spurious_budget;
        } else {
            labels[i] = UserOutcome::erasure;
        }
    }
    return labels;
}

OutcomeTally tally_outcomes(const std::vector<std::uint64_t>& decoded,
                            const std::vector<std::uint64_t>& truth) {
    const std::vector<UserOutcome> labels = classify_outcome(decoded, truth);
    OutcomeTally tally;
    for (UserOutcome label : labels) {
        switch (label) {
            case UserOutcome::correct: ++tally.correct; break;
            case UserOutcome::erasure: ++tally.erasure; break;
            case UserOutcome::error: ++tally.error; break;
            case UserOutcome::collision: ++tally.collision; break;
        }
    }
    tally.users = tally.correct + tally.erasure + tally.error;

    std::unordered_set<std::uint64_t> truth_set(truth.begin(), truth.end());
    std::unordered_set<std::uint64_t> decoded_set(decoded.begin(), decoded.end());
    std::uint64_t spurious_total = 0;
    for (std::uint64_t v : decoded_set) {
        if (truth_set.find(v) == truth_set.end()) ++spurious_total;
    }
    tally.spurious_unattributed = spurious_total - tally.error;
    return tally;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = (phat + 0.5 * z2n) / denom;
    const double half = (z / denom) * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n));
    WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) ci.low = 0.0;       // endpoints are exact at the boundary
    if (successes == trials) ci.high = 1.0;
    return ci;
}

unsigned calibrate_theta(const ExperimentConfig& cfg, unsigned n_rx) {
    validate_common(cfg);
    const GaloisField field(cfg.code.m);
    const CodeParams params(field, cfg.code.n, cfg.code.k);
    const ListDecoder decoder(params);
    ChannelConfig ch = cfg.channel;
    ch.n_sym = cfg.code.n;
    return calibrate_theta_impl(cfg, decoder, ch, n_rx);
}

OutcomeCounts run_miss_detection(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.channel.s < 2) throw std::invalid_argument("config: need at least 2 subcarriers");

    OutcomeCounts out;
    out.experiment = ExperimentKind::miss_detection;
    out.metadata = common_metadata(cfg, cfg.channel);

    const std::uint32_t n_sir = static_cast<std::uint32_t>(cfg.sir_points_db.size());
    for (std::uint32_t nrx_idx = 0; nrx_idx < cfg.nrx_list.size(); ++nrx_idx) {
        const unsigned nrx = cfg.nrx_list[nrx_idx];
        for (std::uint32_t sir_idx = 0; sir_idx < n_sir; ++sir_idx) {
            ChannelConfig ch = cfg.channel;
            ch.n_rx = nrx;
            ch.sir_db = cfg.sir_points_db[sir_idx];
            DetectorConfig det = cfg.detector;
            det.n_rx = nrx;

            const std::uint32_t point = nrx_idx * n_sir + sir_idx;
            const double x_known = threshold_for_pfa(det, det.sigma2_known);

            const MissAcc acc = accumulate_trials<MissAcc>(
                cfg.threads, cfg.trials_per_point, [&](MissAcc& a, std::uint64_t t) {
                    Philox4x32 tone_rng(cfg.seed,
                                        derive_stream(point, static_cast<std::uint32_t>(t), kLaneMessage));
                    std::vector<std::uint32_t> schedule(ch.n_sym);
                    for (auto& tone : schedule) {
                        tone = static_cast<std::uint32_t>(tone_rng.uniform_below(ch.s));
                    }
                    Philox4x32 chan_rng(cfg.seed,
                                        derive_stream(point, static_cast<std::uint32_t>(t), kLaneChannel));
                    const ChannelGains gains = gen_channel(ch, 1, chan_rng);
                    Philox4x32 intf_rng(
                        cfg.seed, derive_stream(point, static_cast<std::uint32_t>(t), kLaneInterference));
                    const ReceivedGrid grid = transmit({schedule}, gains, ch, intf_rng);
                    const EnergyGrid energy = combine_energy(grid);

                    const double sigma2 =
                        det.sigma2_mode == Sigma2Mode::known
                            ? det.sigma2_known
                            : estimate_interference_power(energy, ch.n_rx,
                                                          !ch.independent_interference);
                    const double x = threshold_for_pfa(det, sigma2);

                    for (unsigned n = 0; n < ch.n_sym; ++n) {
                        for (unsigned k = 0; k < ch.s; ++k) {
                            const bool hit = energy.at(n, k) >= x;
                            if (k == schedule[n]) {
                                ++a.tone_decisions;
                                if (!hit) ++a.misses;
                            } else {
                                ++a.noise_decisions;
                                if (hit) ++a.false_alarms;
                            }
                        }
                    }
                });

            PointCounts pc;
            pc.sir_db = ch.sir_db;
            pc.n_rx = nrx;
            pc.trials = cfg.trials_per_point;
            pc.tone_decisions = acc.tone_decisions;
            pc.misses = acc.misses;
            pc.noise_decisions = acc.noise_decisions;
            pc.false_alarms = acc.false_alarms;
            pc.p_miss_analytic = p_miss(x_known, nrx, det.sigma2_known, ch.tone_energy());
            out.points.push_back(pc);
        }
    }
    return out;
}

OutcomeCounts run_multiuser_decode(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.n_users == 0) throw std::invalid_argument("config: users must be >= 1");

    const GaloisField field(cfg.code.m);
    const CodeParams params(field, cfg.code.n, cfg.code.k);
    const ListDecoder decoder(params);

    ChannelConfig ch_base = cfg.channel;
    ch_base.n_sym = cfg.code.n;  // one code symbol per OFDM symbol
    if (!cfg.perfect_detection && ch_base.s < field.order()) {
        throw std::invalid_argument("config: subcarrier count must cover the field order S");
    }
    if (cfg.decode_threshold > cfg.code.n) {
        throw std::invalid_argument("config: theta must be in [0, N]");
    }

    OutcomeCounts out;
    out.experiment = ExperimentKind::multiuser_decode;

    std::vector<unsigned> thetas;
    const std::uint32_t n_sir = static_cast<std::uint32_t>(cfg.sir_points_db.size());
    for (std::uint32_t nrx_idx = 0; nrx_idx < cfg.nrx_list.size(); ++nrx_idx) {
        const unsigned nrx = cfg.nrx_list[nrx_idx];
        const unsigned theta = cfg.decode_threshold != 0
                                   ? cfg.decode_threshold
                                   : calibrate_theta_impl(cfg, decoder, ch_base, nrx);
        thetas.push_back(theta);

        for (std::uint32_t sir_idx = 0; sir_idx < n_sir; ++sir_idx) {
            ChannelConfig ch = ch_base;
            ch.n_rx = nrx;
            ch.sir_db = cfg.sir_points_db[sir_idx];
            DetectorConfig det = cfg.detector;
            det.n_rx = nrx;

            const std::uint32_t point = nrx_idx * n_sir + sir_idx;
            const MultiAcc acc = accumulate_trials<MultiAcc>(
                cfg.threads, cfg.trials_per_point, [&](MultiAcc& a, std::uint64_t t) {
                    std::vector<std::uint64_t> truth;
                    DetectedToneSets detected;
                    multiuser_trial(cfg, ch, det, decoder, point, t, truth, detected);
                    const auto candidates = decoder.decode(detected, theta);
                    std::vector<std::uint64_t> decoded;
                    decoded.reserve(candidates.size());
                    for (const auto& c : candidates) decoded.push_back(c.index);
                    const OutcomeTally tally = tally_outcomes(decoded, truth);
                    a.users_total += truth.size();
                    a.correct += tally.correct;
                    a.erasure += tally.erasure;
                    a.error += tally.error;
                    a.collision += tally.collision;
                    a.spurious += tally.spurious_unattributed;
                });

            PointCounts pc;
            pc.sir_db = ch.sir_db;
            pc.n_rx = nrx;
            pc.trials = cfg.trials_per_point;
            pc.users_total = acc.users_total;
            pc.correct = acc.correct;
            pc.erasures = acc.erasure;
            pc.errors = acc.error;
            pc.collisions = acc.collision;
            pc.spurious_unattributed = acc.spurious;
            pc.theta = theta;
            out.points.push_back(pc);
        }
    }

    out.metadata = common_metadata(cfg, ch_base);
    out.metadata.push_back("code: (" + std::to_string(cfg.code.n) + "," + std::to_string(cfg.code.k) +
                           ") over GF(2^" + std::to_string(cfg.code.m) + ")");
    out.metadata.push_back("users_per_trial: " + std::to_string(cfg.n_users));
    out.metadata.push_back(std::string("perfect_detection: ") +
                           (cfg.perfect_detection ? "true" : "false"));
    std::string theta_line = cfg.decode_threshold != 0 ? "decode_theta: fixed " : "decode_theta: calibrated ";
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (i) theta_line += ",";
        theta_line += "nrx" + std::to_string(cfg.nrx_list[i]) + "=" + std::to_string(thetas[i]);
    }
    out.metadata.push_back(theta_line);
    return out;
}

OutcomeCounts run_experiment(const ExperimentConfig& cfg) {
    return cfg.experiment == ExperimentKind::miss_detection ? run_miss_detection(cfg)
                                                            : run_multiuser_decode(cfg);
}

std::string render_csv(const OutcomeCounts& counts) {
    if (counts.points.empty()) throw std::invalid_argument("render_csv: no sweep points");

    std::vector<PointCounts> rows = counts.points;
    std::sort(rows.begin(), rows.end(), [](const PointCounts& a, const PointCounts& b) {
        if (a.sir_db != b.sir_db) return a.sir_db < b.sir_db;
        return a.n_rx < b.n_rx;
    });

    std::string out;
    for (const std::string& line : counts.metadata) out += "# " + line + "\n";

    const bool miss = counts.experiment == ExperimentKind::miss_detection;
    if (miss) {
        out += "sir_db,n_rx,trials,p_miss_emp,p_miss_emp_ci_low,p_miss_emp_ci_high,"
               "p_miss_analytic,p_fa_emp,p_fa_emp_ci_low,p_fa_emp_ci_high\n";
    } else {
        out += "sir_db,n_rx,trials,p_erasure,p_erasure_ci_low,p_erasure_ci_high,"
               "p_error,p_error_ci_low,p_error_ci_high,p_collision,p_collision_ci_low,"
               "p_collision_ci_high\n";
    }

    for (const PointCounts& pc : rows) {
        out += fmt_g(pc.sir_db) + "," + std::to_string(pc.n_rx) + "," + std::to_string(pc.trials);
        if (miss) {
            const WilsonInterval miss_ci = wilson_interval(pc.misses, pc.tone_decisions);
            const WilsonInterval fa_ci = wilson_interval(pc.false_alarms, pc.noise_decisions);
            out += "," + fmt_g(safe_ratio(pc.misses, pc.tone_decisions));
            out += "," + fmt_g(miss_ci.low) + "," + fmt_g(miss_ci.high);
            out += "," + fmt_g(pc.p_miss_analytic);
            out += "," + fmt_g(safe_ratio(pc.false_alarms, pc.noise_decisions));
            out += "," + fmt_g(fa_ci.low) + "," + fmt_g(fa_ci.high);
        } else {
            const std::uint64_t effective = pc.users_total - pc.collisions;
            const WilsonInterval erasure_ci = wilson_interval(pc.erasures, effective);
            const WilsonInterval error_ci = wilson_interval(pc.errors, effective);
            const WilsonInterval coll_ci = wilson_interval(pc.collisions, pc.users_total);
            out += "," + fmt_g(safe_ratio(pc.erasures, effective));
            out += "," + fmt_g(erasure_ci.low) + "," + fmt_g(erasure_ci.high);
            out += "," + fmt_g(safe_ratio(pc.errors, effective));
            out += "," + fmt_g(error_ci.low) + "," + fmt_g(error_ci.high);
            out += "," + fmt_g(safe_ratio(pc.collisions, pc.users_total));
            out += "," + fmt_g(coll_ci.low) + "," + fmt_g(coll_ci.high);
        }
        out += "\n";
    }
    return out;
}

void emit_csv(const OutcomeCounts& counts, const std::string& path) {
    const std::string body = render_csv(counts);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    file << body;
    file.flush();
    if (!file) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw std::out_of_range("CsvTable: no column named '" + name + "'");
}

double CsvTable::cell(std::size_t row, const std::string& name) const {
    return rows.at(row).at(column(name));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

CsvTable parse_results_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("parse_results_csv: cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    while (std::getline(file, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (table.columns.empty()) {
            table.columns = split_csv_line(line);
            continue;
        }
        std::vector<double> row;
        for (const std::string& field : split_csv_line(line)) row.push_back(std::stod(field));
        if (row.size() != table.columns.size()) {
            throw std::runtime_error("parse_results_csv: ragged row in '" + path + "'");
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw std::runtime_error("parse_results_csv: no header in '" + path + "'");
    return table;
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    if (kind == ExperimentKind::miss_detection) {
        cfg.trials_per_point = 20000;
        cfg.channel.model = ChannelModel::flat_rayleigh;
        cfg.channel.n_sym = 1;  // one tone decision per trial
    } else {
        cfg.trials_per_point = 2000;
        cfg.channel.model = ChannelModel::pedb;
        cfg.channel.n_sym = 14;
    }
    return cfg;
}

ExperimentKind parse_experiment_kind(const std::string& text) {
    if (text == "miss_detection" || text == "miss") return ExperimentKind::miss_detection;
    if (text == "multiuser_decode" || text == "multiuser") return ExperimentKind::multiuser_decode;
    throw std::invalid_argument("unknown experiment '" + text + "'");
}

ChannelModel parse_channel_model(const std::string& text) {
    if (text == "awgn") return ChannelModel::awgn;
    if (text == "flat_rayleigh" || text == "rayleigh") return ChannelModel::flat_rayleigh;
    if (text == "pedb") return ChannelModel::pedb;
    throw std::invalid_argument("unknown channel model '" + text + "'");
}

FadingTime parse_fading_time(const std::string& text) {
    if (text == "block") return FadingTime::block;
    if (text == "per_symbol") return FadingTime::per_symbol;
    if (text == "gauss_markov") return FadingTime::gauss_markov;
    throw std::invalid_argument("unknown fading_time '" + text + "'");
}

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw std::invalid_argument("expected a boolean, got '" + text + "'");
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated number list");
    return out;
}

std::vector<unsigned> parse_unsigned_list(const std::string& text) {
    std::vector<unsigned> out;
    for (double v : parse_double_list(text)) {
        if (v < 0 || v != static_cast<unsigned>(v)) {
            throw std::invalid_argument("expected nonnegative integers in list");
        }
        out.push_back(static_cast<unsigned>(v));
    }
    return out;
}

void load_config_ini(ExperimentConfig& cfg, std::istream& in) {
    std::string line;
    std::string section;
    unsigned line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "channel" && section != "detector") {
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (section == "experiment" || section.empty()) {
                if (key == "kind" || key == "experiment") cfg.experiment = parse_experiment_kind(value);
                else if (key == "sir_db" || key == "sir") cfg.sir_points_db = parse_double_list(value);
                else if (key == "trials") cfg.trials_per_point = std::stoull(value);
                else if (key == "users") cfg.n_users = static_cast<unsigned>(std::stoul(value));
                else if (key == "seed") cfg.seed = std::stoull(value);
                else if (key == "theta") cfg.decode_threshold = static_cast<unsigned>(std::stoul(value));
                else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
                else if (key == "code_n") cfg.code.n = static_cast<unsigned>(std::stoul(value));
                else if (key == "code_k") cfg.code.k = static_cast<unsigned>(std::stoul(value));
                else if (key == "code_m") cfg.code.m = static_cast<unsigned>(std::stoul(value));
                else if (key == "perfect_detection") cfg.perfect_detection = parse_bool(value);
                else if (key == "out") cfg.out_path = value;
                else throw std::invalid_argument("unknown key '" + key + "'");
            } else if (section == "channel") {
                if (key == "model") cfg.channel.model = parse_channel_model(value);
                else if (key == "nrx") cfg.nrx_list = parse_unsigned_list(value);
                else if (key == "subcarriers") cfg.channel.s = static_cast<unsigned>(std::stoul(value));
                else if (key == "symbols") cfg.channel.n_sym = static_cast<unsigned>(std::stoul(value));
                else if (key == "fading_time") cfg.channel.fading_time = parse_fading_time(value);
                else if (key == "doppler_hz") cfg.channel.doppler_hz = std::stod(value);
                else if (key == "subcarrier_spacing_hz") cfg.channel.subcarrier_spacing_hz = std::stod(value);
                else if (key == "energy_fraction") cfg.channel.energy_fraction = std::stod(value);
                else if (key == "independent_interference") cfg.channel.independent_interference = parse_bool(value);
                else throw std::invalid_argument("unknown key '" + key + "'");
            } else {  // detector
                if (key == "pfa") cfg.detector.target_pfa = std::stod(value);
                else if (key == "sigma2_mode")
                    cfg.detector.sigma2_mode = value == "known"       ? Sigma2Mode::known
                                               : value == "estimated" ? Sigma2Mode::estimated
                                                                      : throw std::invalid_argument(
                                                                            "unknown sigma2_mode '" + value + "'");
                else if (key == "sigma2") cfg.detector.sigma2_known = std::stod(value);
                else throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config file '" + path + "'");
    // Peek at the experiment kind first so kind-specific defaults apply.
    ExperimentConfig probe;
    load_config_ini(probe, file);
    ExperimentConfig cfg = default_config(probe.experiment);
    file.clear();
    file.seekg(0);
    load_config_ini(cfg, file);
    return cfg;
}

}  // namespace sts
