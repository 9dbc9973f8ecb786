#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sts/channel.hpp"
#include "sts/codec.hpp"
#include "sts/detector.hpp"

namespace sts {

enum class ExperimentKind { miss_detection, multiuser_decode };

struct CodeSpec {
    unsigned n = 14;
    unsigned k = 1;
    unsigned m = 9;  // GF(2^m)
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::miss_detection;
    std::vector<double> sir_points_db{-20.0, -15.0, -10.0, -5.0, 0.0};
    std::vector<unsigned> nrx_list{1, 2, 4};
    unsigned n_users = 30;
    CodeSpec code;
    ChannelConfig channel;     // n_rx, sir_db, n_sym are filled in per sweep point
    DetectorConfig detector;
    unsigned decode_threshold = 0;  // 0 = calibrate at the lowest SIR point
    std::uint64_t trials_per_point = 10000;
    std::uint64_t seed = 1;
    bool perfect_detection = false;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::string out_path = "results.csv";
};

/// Counters for one (sir_db, n_rx) sweep point. Everything is integral so
/// that merging per-thread partial results is exact and order-independent.
struct PointCounts {
    double sir_db = 0.0;
    unsigned n_rx = 1;
    std::uint64_t trials = 0;

    // miss_detection
    std::uint64_t tone_decisions = 0;
    std::uint64_t misses = 0;
    std::uint64_t noise_decisions = 0;
    std::uint64_t false_alarms = 0;
    double p_miss_analytic = 0.0;

    // multiuser_decode (per-user accounting; collisions tracked separately)
    std::uint64_t users_total = 0;
    std::uint64_t correct = 0;
    std::uint64_t erasures = 0;
    std::uint64_t errors = 0;
    std::uint64_t collisions = 0;
    std::uint64_t spurious_unattributed = 0;
    unsigned theta = 0;
};

struct OutcomeCounts {
    ExperimentKind experiment = ExperimentKind::miss_detection;
    std::vector<std::string> metadata;  // emitted as "# key: value" lines
    std::vector<PointCounts> points;
};

enum class UserOutcome { correct, erasure, error, collision };

/// Per-user decode outcome against the ground truth. Duplicated truth
/// messages are collisions and take no part in erasure/error accounting.
/// A missing truth message is an error when an unattributed spurious decoded
/// message remains (attributed in ascending truth order), else an erasure,
/// so correct + erasure + error partitions the non-colliding users exactly.
std::vector<UserOutcome> classify_outcome(const std::vector<std::uint64_t>& decoded,
                                          const std::vector<std::uint64_t>& truth);

struct OutcomeTally {
    std::uint64_t users = 0;  // non-colliding
    std::uint64_t correct = 0;
    std::uint64_t erasure = 0;
    std::uint64_t error = 0;
    std::uint64_t collision = 0;
    std::uint64_t spurious_unattributed = 0;
};
OutcomeTally tally_outcomes(const std::vector<std::uint64_t>& decoded,
                            const std::vector<std::uint64_t>& truth);

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Smallest theta whose measured per-user error rate stays below 1% at the
/// lowest configured SIR point (calibration run with a dedicated stream).
unsigned calibrate_theta(const ExperimentConfig& cfg, unsigned n_rx);

OutcomeCounts run_miss_detection(const ExperimentConfig& cfg);
OutcomeCounts run_multiuser_decode(const ExperimentConfig& cfg);
OutcomeCounts run_experiment(const ExperimentConfig& cfg);

std::string render_csv(const OutcomeCounts& counts);
/// Throws std::invalid_argument on empty counts, std::runtime_error on I/O failure.
void emit_csv(const OutcomeCounts& counts, const std::string& path);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;  // throws if absent
    double cell(std::size_t row, const std::string& name) const;
};
CsvTable parse_results_csv(const std::string& path);

/// Baseline config per experiment (Fig. 3/4-style sweeps).
ExperimentConfig default_config(ExperimentKind kind);

/// Key/value config file with [experiment], [channel], [detector] sections.
/// Unknown keys are rejected.
void load_config_ini(ExperimentConfig& cfg, std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

ExperimentKind parse_experiment_kind(const std::string& text);
ChannelModel parse_channel_model(const std::string& text);
FadingTime parse_fading_time(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<unsigned> parse_unsigned_list(const std::string& text);

}  // namespace sts
