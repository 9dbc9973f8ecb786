#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "sts/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Link-level Monte Carlo simulator for coded single-tone signaling"};

    std::string experiment;
    std::string config_path;
    std::string out_path;
    std::string sir_list;
    std::string nrx_list;
    std::string channel_model;
    std::string sigma2_mode;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    unsigned users = 0;
    unsigned theta = 0;
    unsigned threads = 0;
    double pfa = 0.0;
    bool perfect_detection = false;
    bool independent_interference = false;

    app.add_option("-e,--experiment", experiment,
                   "Experiment kind: miss_detection | multiuser_decode");
    app.add_option("-c,--config", config_path, "Config file ([experiment]/[channel]/[detector] sections)");
    app.add_option("-o,--out", out_path, "Output CSV path");
    app.add_option("--seed", seed, "64-bit RNG seed");
    app.add_option("--trials", trials, "Monte Carlo trials per sweep point");
    app.add_option("--sir", sir_list, "Comma-separated SIR points in dB, e.g. -20,-15,-10");
    app.add_option("--users", users, "Simultaneous STS transmitters (multiuser_decode)");
    app.add_option("--nrx", nrx_list, "Comma-separated receive antenna counts, e.g. 1,2,4");
    app.add_option("--channel", channel_model, "Channel model: awgn | flat_rayleigh | pedb");
    app.add_option("--theta", theta, "List-decoder acceptance threshold; 0 = calibrate");
    app.add_option("--pfa", pfa, "Per-tone false alarm probability target");
    app.add_option("--sigma2-mode", sigma2_mode, "Interference variance at the detector: known | estimated");
    app.add_option("--threads", threads, "Worker threads; 0 = hardware concurrency");
    app.add_flag("--perfect-detection", perfect_detection,
                 "Bypass channel and detector; feed exact tone sets to the decoder");
    app.add_flag("--independent-interference", independent_interference,
                 "Draw interference independently per antenna instead of common");

    CLI11_PARSE(app, argc, argv);

    try {
        sts::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = sts::load_config_file(config_path);
        } else {
            const auto kind = experiment.empty() ? sts::ExperimentKind::miss_detection
                                                 : sts::parse_experiment_kind(experiment);
            cfg = sts::default_config(kind);
        }

        // CLI flags override the config file.
        if (app.count("--experiment")) cfg.experiment = sts::parse_experiment_kind(experiment);
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--trials")) cfg.trials_per_point = trials;
        if (app.count("--sir")) cfg.sir_points_db = sts::parse_double_list(sir_list);
        if (app.count("--users")) cfg.n_users = users;
        if (app.count("--nrx")) cfg.nrx_list = sts::parse_unsigned_list(nrx_list);
        if (app.count("--channel")) cfg.channel.model = sts::parse_channel_model(channel_model);
        if (app.count("--theta")) cfg.decode_threshold = theta;
        if (app.count("--pfa")) cfg.detector.target_pfa = pfa;
        if (app.count("--sigma2-mode")) {
            if (sigma2_mode == "known") cfg.detector.sigma2_mode = sts::Sigma2Mode::known;
            else if (sigma2_mode == "estimated") cfg.detector.sigma2_mode = sts::Sigma2Mode::estimated;
            else throw std::invalid_argument("unknown sigma2 mode '" + sigma2_mode + "'");
        }
        if (app.count("--threads")) cfg.threads = threads;
        if (perfect_detection) cfg.perfect_detection = true;
        if (independent_interference) cfg.channel.independent_interference = true;
        if (app.count("--out")) cfg.out_path = out_path;

        const sts::OutcomeCounts counts = sts::run_experiment(cfg);
        sts::emit_csv(counts, cfg.out_path);
        std::printf("wrote %s (%zu sweep points)\n", cfg.out_path.c_str(), counts.points.size());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
