#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "scengen/actions.hpp"
#include "scengen/episode.hpp"
#include "scengen/experiment.hpp"

namespace fs = std::filesystem;
using namespace scengen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> layout;
    std::optional<std::string> policy;
    std::optional<int> episodes;
    std::optional<double> otp;
    std::optional<double> rcol;
    std::optional<std::string> ablation;
    std::string out_dir = "out";
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Experiment config JSON file");
    cmd->add_option("--seed", flags.seed, "Experiment seed");
    cmd->add_option("--layout", flags.layout,
                    "Road layout (l_shaped_junction, corner_intersection, "
                    "multi_lane_crossroad, curved_boulevard)");
    cmd->add_option("--policy", flags.policy, "Policy: avastra or random");
    cmd->add_option("--episodes", flags.episodes, "Episode count");
    cmd->add_option("--otp", flags.otp, "Observation period per action, seconds");
    cmd->add_option("--rcol", flags.rcol, "Collision reward");
    cmd->add_option("--ablation", flags.ablation,
                    "State ablation: full, external_only, internal_only");
    cmd->add_option("--out", flags.out_dir, "Output directory");
}

ExperimentConfig resolve_config(const CommonFlags& flags, bool episodes_are_training) {
    ExperimentConfig config;
    if (!flags.config_path.empty())
        config = ExperimentConfig::from_json(read_file(flags.config_path));
    if (flags.seed) config.seed = *flags.seed;
    if (flags.layout) {
        auto id = layout_from_string(*flags.layout);
        if (!id) throw std::invalid_argument("unknown layout: " + *flags.layout);
        config.train_layouts = {*id};
        config.eval_layouts = {*id};
    }
    if (flags.policy) config.policy = policy_from_string(*flags.policy);
    if (flags.episodes) {
        if (episodes_are_training)
            config.train_episodes = *flags.episodes;
        else
            config.eval_episodes = *flags.episodes;
    }
    if (flags.otp) config.episode.otp_seconds = *flags.otp;
    if (flags.rcol) config.episode.r_col = *flags.rcol;
    if (flags.ablation) config.episode.ablation = ablation_from_string(*flags.ablation);
    config.validate();
    return config;
}

int cmd_train(const CommonFlags& flags) {
    ExperimentConfig config = resolve_config(flags, true);
    TrainingResult result = run_training(config);
    fs::path out(flags.out_dir);
    write_file(out / "config.json", config.to_json());
    write_file(out / "checkpoint.json", result.agent.checkpoint_json());
    write_file(out / "training_curve.csv", curve_to_csv(result.curve));
    std::cout << "trained " << config.train_episodes << " episodes, "
              << result.counted_collisions << " counted collisions\n"
              << "checkpoint: " << (out / "checkpoint.json").string() << "\n";
    return kExitOk;
}

int cmd_eval(const CommonFlags& flags, const std::string& checkpoint_path, bool keep_traces) {
    ExperimentConfig config = resolve_config(flags, false);
    std::optional<DdqnAgent> agent;
    const Mlp* net = nullptr;
    if (config.policy == PolicyKind::Avastra) {
        if (checkpoint_path.empty())
            throw std::invalid_argument("--checkpoint is required for the avastra policy");
        agent = DdqnAgent::from_checkpoint(read_file(checkpoint_path), config.agent);
        net = &agent->selection_net();
    }
    EvaluationResult result = run_evaluation(config, config.policy, net, keep_traces);
    fs::path out(flags.out_dir);
    std::string name = std::string("report_") + to_string(config.policy) + ".json";
    write_file(out / name, result.report.to_json());
    if (keep_traces) {
        std::ostringstream traces;
        for (const auto& trace : result.traces) write_trace_jsonl(trace, traces);
        write_file(out / "traces.jsonl", traces.str());
    }
    std::cout << result.report.to_json() << "\n";
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& report_paths, const std::string& out_dir) {
    std::vector<MetricsReport> reports;
    for (const auto& path : report_paths)
        reports.push_back(MetricsReport::from_json(read_file(path)));
    ComparisonTable table = compare(reports);
    fs::path out(out_dir);
    write_file(out / "comparison.csv", table.to_csv());
    write_file(out / "comparison.json", table.to_json());
    std::cout << table.to_csv();
    return kExitOk;
}

int cmd_replay(const std::string& trace_path, const CommonFlags& flags) {
    std::ifstream in(trace_path);
    if (!in) throw std::invalid_argument("cannot open trace: " + trace_path);
    // the file may hold several concatenated traces; split on header lines
    std::vector<std::string> chunks;
    std::string line;
    std::string current;
    while (std::getline(in, line)) {
        if (line.find("\"type\":\"header\"") != std::string::npos && !current.empty()) {
            chunks.push_back(current);
            current.clear();
        }
        current += line;
        current += '\n';
    }
    if (!current.empty()) chunks.push_back(current);
    if (chunks.empty()) throw TraceFormatError(1, "empty trace file");

    ExperimentConfig config = resolve_config(flags, false);
    bool all_identical = true;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        EpisodeTrace trace = trace_from_jsonl(chunks[i]);
        EpisodeConfig episode = config.episode;
        episode.layout = trace.layout;  // the header pins the scenario context
        episode.ablation = trace.ablation;
        ReplayReport report = replay_trace(trace, episode);
        std::cout << "trace " << i << " (seed " << trace.seed << "): " << report.message << "\n";
        all_identical = all_identical && report.identical;
    }
    return all_identical ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical-scenario generator for a rule-based driving stack"};
    app.require_subcommand(1);

    CommonFlags train_flags, eval_flags, replay_flags;
    std::string checkpoint_path;
    bool keep_traces = false;
    std::vector<std::string> report_paths;
    std::string compare_out = "out";
    std::string trace_path;

    CLI::App* train = app.add_subcommand("train", "Train the scenario-generation agent");
    add_common_flags(train, train_flags);

    CLI::App* eval = app.add_subcommand("eval", "Evaluate a policy and write a metrics report");
    add_common_flags(eval, eval_flags);
    eval->add_option("--checkpoint", checkpoint_path, "Trained checkpoint JSON");
    eval->add_flag("--traces", keep_traces, "Also write episode traces (JSONL)");

    CLI::App* comp = app.add_subcommand("compare", "Join metrics reports into a comparison table");
    comp->add_option("reports", report_paths, "Metrics report JSON files")->required();
    comp->add_option("--out", compare_out, "Output directory");

    CLI::App* replay = app.add_subcommand("replay", "Re-simulate a stored trace and diff it");
    replay->add_option("trace", trace_path, "Trace JSONL file")->required();
    add_common_flags(replay, replay_flags);

    CLI::App* actions = app.add_subcommand("actions", "Dump the action catalog as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (train->parsed()) return cmd_train(train_flags);
        if (eval->parsed()) return cmd_eval(eval_flags, checkpoint_path, keep_traces);
        if (comp->parsed()) return cmd_compare(report_paths, compare_out);
        if (replay->parsed()) return cmd_replay(trace_path, replay_flags);
        if (actions->parsed()) {
            std::cout << action_catalog_json() << "\n";
            return kExitOk;
        }
    } catch (const NumericDomainError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const TraceFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
