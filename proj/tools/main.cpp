#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paceloop/engine.hpp"
#include "paceloop/error.hpp"
#include "paceloop/evaluation.hpp"
#include "paceloop/event_log.hpp"
#include "paceloop/synth.hpp"
#include "paceloop/wav.hpp"

namespace {

using namespace paceloop;

struct ConfigArgs {
    std::string config_path;
    std::optional<std::uint32_t> seed;
    std::vector<std::string> overrides;  // key=value
    std::string score_table;
};

void add_config_options(CLI::App* app, ConfigArgs& args) {
    app->add_option("--config", args.config_path, "session config file (key=value)");
    app->add_option("--seed", args.seed, "RNG seed (overrides config file)");
    app->add_option("--set", args.overrides, "extra key=value overrides")
        ->type_name("KEY=VALUE");
    app->add_option("--scores", args.score_table,
                    "CSV score table replacing the built-in heuristic scorer");
}

SessionConfig resolve_config(const ConfigArgs& args) {
    SessionConfig config;
    if (!args.config_path.empty()) {
        config = load_config_file(args.config_path);
    }
    for (const std::string& entry : args.overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            fail("parse-error", "--set expects key=value, got '" + entry + "'");
        }
        set_config_value(config, entry.substr(0, eq), entry.substr(eq + 1));
    }
    if (args.seed) {
        config.rng_seed = *args.seed;
    }
    validate(config);
    return config;
}

std::shared_ptr<const ChewScorer> resolve_scorer(const ConfigArgs& args) {
    if (args.score_table.empty()) {
        return std::make_shared<HeuristicScorer>();
    }
    return std::make_shared<TableScorer>(ScoreTable::load(args.score_table));
}

int cmd_replay(const std::string& wav, const ConfigArgs& args,
               const std::string& truth, const std::string& out_dir) {
    const SessionConfig config = resolve_config(args);
    const std::optional<std::string> truth_path =
        truth.empty() ? std::nullopt : std::optional<std::string>(truth);
    const ReplayResult result =
        run_replay(wav, config, out_dir, truth_path, resolve_scorer(args));

    std::cout << summary_text(result.summary);
    if (result.report) {
        std::cout << report_text(*result.report);
    }
    const auto windows = static_cast<long>(
        std::ceil(result.duration_s / config.window_len_s - 1e-9));
    std::printf("windows processed: %ld, mean processing time %.2f ms per %.0f s window\n",
                windows, result.mean_window_time_ms, config.window_len_s);
    if (!out_dir.empty()) {
        std::cout << "outputs written to " << out_dir << "\n";
    }
    return 0;
}

int cmd_stream(const ConfigArgs& args) {
    const SessionConfig config = resolve_config(args);
    run_stream(std::cin, std::cout, std::cerr, config, resolve_scorer(args));
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir,
              std::optional<std::uint32_t> seed) {
    SynthMealSpec spec;
    if (!spec_path.empty()) {
        spec = load_synth_spec(spec_path);
    }
    if (seed) {
        spec.seed = *seed;
    }
    const SynthMeal meal = synth_meal(spec);
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    write_wav((dir / "meal.wav").string(), meal.samples);
    write_annotations(meal.truth, (dir / "truth.tsv").string());
    std::printf("wrote %.1f s meal: %lld chews, %lld swallows, %lld artifacts -> %s\n",
                static_cast<double>(meal.samples.size()) / 16000.0,
                static_cast<long long>(meal.planted_chews),
                static_cast<long long>(meal.planted_swallows),
                static_cast<long long>(meal.planted_artifacts), out_dir.c_str());
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& out_dir) {
    const std::vector<EventLogRecord> records = read_event_log(pred_path);
    std::vector<double> chews;
    std::vector<double> swallows;
    for (const EventLogRecord& record : records) {
        if (record.kind == RecordKind::Chew) {
            chews.push_back(record.t);
        } else if (record.kind == RecordKind::Swallow) {
            swallows.push_back(record.t);
        }
    }
    const AnnotationTrack truth = load_annotations(truth_path);
    const EvaluationReport report = evaluate_against_truth(chews, swallows, truth);
    std::cout << report_text(report);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto dir = std::filesystem::path(out_dir);
        std::ofstream text(dir / "report.txt");
        text << report_text(report);
        std::ofstream csv(dir / "report.csv");
        csv << report_csv(report);
    }
    return 0;
}

int cmd_stats(const std::vector<std::string>& paths, bool csv) {
    std::vector<AnnotationTrack> tracks;
    tracks.reserve(paths.size());
    for (const std::string& path : paths) {
        tracks.push_back(load_annotations(path));
    }
    const DatasetStats stats = dataset_stats(tracks);
    std::cout << (csv ? stats_csv(stats) : stats_text(stats));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chewing-audio eating pace engine"};
    app.require_subcommand(1);

    std::string wav, truth, out_dir, spec_path, pred_path;
    std::vector<std::string> stats_paths;
    bool stats_as_csv = false;
    ConfigArgs replay_args, stream_args;
    std::optional<std::uint32_t> synth_seed;

    auto* replay = app.add_subcommand("replay", "run the pipeline over a WAV file");
    replay->add_option("wav", wav, "PCM16 mono 16 kHz WAV")->required();
    replay->add_option("--truth", truth, "annotation TSV for an evaluation report");
    replay->add_option("--out", out_dir, "output directory");
    add_config_options(replay, replay_args);

    auto* stream = app.add_subcommand(
        "stream", "run the pipeline over raw PCM16 on stdin, events to stdout");
    add_config_options(stream, stream_args);

    auto* synth = app.add_subcommand("synth", "generate a synthetic meal + truth track");
    synth->add_option("--spec", spec_path, "generator spec file (key=value)");
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_option("--seed", synth_seed, "seed override");

    auto* eval = app.add_subcommand("eval", "score an event log against annotations");
    eval->add_option("--pred", pred_path, "JSONL event log")->required();
    eval->add_option("--truth", truth, "annotation TSV")->required();
    eval->add_option("--out", out_dir, "output directory for report files");

    auto* stats = app.add_subcommand("stats", "dataset statistics over annotation files");
    stats->add_option("tracks", stats_paths, "annotation TSV files")->required();
    stats->add_flag("--csv", stats_as_csv, "emit CSV instead of text");

    CLI11_PARSE(app, argc, argv);

    try {
        if (replay->parsed()) {
            return cmd_replay(wav, replay_args, truth, out_dir);
        }
        if (stream->parsed()) {
            return cmd_stream(stream_args);
        }
        if (synth->parsed()) {
            return cmd_synth(spec_path, out_dir, synth_seed);
        }
        if (eval->parsed()) {
            return cmd_eval(pred_path, truth, out_dir);
        }
        if (stats->parsed()) {
            return cmd_stats(stats_paths, stats_as_csv);
        }
    } catch (const paceloop::Error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
