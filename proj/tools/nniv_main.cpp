// nniv — interval-based safety verifier for feedforward neural networks.
//
// Subcommands:
//   verify   prove an output safety specification over an input box
//   bound    print the output interval enclosure and width bounds
//   gen-arm  emit the two-link robotic arm scenario (spec + dataset)
//   robust   certify a classifier against a windowed perturbation class

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nniv/nniv.hpp"

namespace {

using nlohmann::json;

constexpr int kExitSafe = 0;
constexpr int kExitUncertain = 1;
constexpr int kExitError = 2;

struct CommonFlags {
    std::string model;
    std::string spec;
    double epsilon = -1.0;  // < 0 means "not set on the command line"
    bool uniform = false;
    bool fail_fast = false;
    int jobs = 1;
    bool dump_partition = false;
    std::string out;
    std::uint64_t seed = 0;
};

void add_verify_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--epsilon", flags.epsilon, "Bisection width tolerance (overrides the spec file)");
    cmd->add_flag("--uniform", flags.uniform, "Use the uniform-partition baseline instead of guided bisection");
    cmd->add_flag("--fail-fast", flags.fail_fast, "Stop at the first witness box");
    cmd->add_option("--jobs", flags.jobs, "Worker threads for the bisection loop")->default_val(1);
    cmd->add_flag("--dump-partition", flags.dump_partition, "Include the full leaf partition in the report");
    cmd->add_option("--out", flags.out, "Write the JSON report here instead of stdout");
    cmd->add_option("--seed", flags.seed, "Seed for randomized generators")->default_val(0);
}

json stats_json(const nniv::VerifyStats& s, std::size_t witness_count) {
    return json{{"boxes_processed", s.boxes_processed},
                {"boxes_proven_safe", s.boxes_proven_safe},
                {"bisections", s.bisections},
                {"max_depth", s.max_depth},
                {"witnesses", witness_count},
                {"wall_time_s", s.wall_time_s}};
}

json verdict_json(const nniv::Verdict& v, bool include_partition) {
    json witnesses = json::array();
    for (const nniv::WitnessPair& w : v.witnesses)
        witnesses.push_back({{"input", nniv::box_to_json(w.in_box)},
                             {"output", nniv::box_to_json(w.out_box)}});
    json out{{"verdict", v.status == nniv::Status::safe ? "safe" : "uncertain"},
             {"stats", stats_json(v.stats, v.witnesses.size())},
             {"witnesses", std::move(witnesses)}};
    if (include_partition) {
        json cells = json::array();
        for (const nniv::PartitionCell& c : v.partition)
            cells.push_back({{"input", nniv::box_to_json(c.in_box)},
                             {"output", nniv::box_to_json(c.out_box)},
                             {"status", c.safe ? "safe" : "witness"}});
        out["partition"] = std::move(cells);
    }
    return out;
}

void emit_report(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw nniv::ParseError("cannot write report to \"" + out_path + "\"");
    out << report.dump(2) << "\n";
}

int run_verify(const CommonFlags& flags) {
    if (flags.fail_fast && flags.dump_partition) {
        std::cerr << "error: --fail-fast aborts the refinement early, so --dump-partition "
                     "cannot produce a complete tiling; drop one of the two\n";
        return kExitError;
    }
    const auto t0 = std::chrono::steady_clock::now();
    nniv::Network net = nniv::load_model(flags.model);
    nniv::ProblemSpec spec = nniv::load_spec(flags.spec);
    const double epsilon = flags.epsilon > 0.0 ? flags.epsilon : spec.epsilon;

    nniv::VerifyOptions opt;
    opt.fail_fast = flags.fail_fast;
    opt.jobs = flags.jobs;
    opt.collect_partition = flags.dump_partition;
    nniv::Verdict verdict = flags.uniform
                                ? nniv::verify_uniform(net, spec.input, spec.unsafe, epsilon, opt)
                                : nniv::verify(net, spec.input, spec.unsafe, epsilon, opt);

    json report = verdict_json(verdict, flags.dump_partition);
    report["format"] = 1;
    report["command"] = "verify";
    report["model"] = flags.model;
    report["spec"] = flags.spec;
    report["epsilon"] = epsilon;
    report["mode"] = flags.uniform ? "uniform" : "guided";
    report["fail_fast"] = flags.fail_fast;
    report["jobs"] = flags.jobs;
    report["input"] = nniv::box_to_json(spec.input);
    report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(report, flags.out);
    return verdict.status == nniv::Status::safe ? kExitSafe : kExitUncertain;
}

int run_bound(const std::string& model_path, const std::string& box_text,
              const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    nniv::Network net = nniv::load_model(model_path);
    json box_doc;
    try {
        box_doc = json::parse(box_text);
    } catch (const json::exception& e) {
        throw nniv::ParseError(std::string("--box: ") + e.what());
    }
    nniv::Box box = nniv::parse_box_json(box_doc);
    if (!box.finite()) throw nniv::ParseError("--box: must be finite");

    nniv::Box out = nniv::network_interval(net, box);
    nniv::LipschitzBound lb = nniv::lipschitz_gamma(net);
    json report{{"format", 1},
                {"command", "bound"},
                {"model", model_path},
                {"input", nniv::box_to_json(box)},
                {"output", nniv::box_to_json(out)},
                {"output_width", out.width()},
                {"gamma", lb.gamma},
                {"xi", lb.xi},
                {"per_layer_norms", lb.per_layer_norms},
                {"excess_width_bound", nniv::excess_width_bound(net, box)}};
    report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(report, out_path);
    return kExitSafe;
}

int run_gen_arm(const std::string& out_dir, double l1, double l2, double epsilon,
                std::uint64_t samples, std::uint64_t seed) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) {
        std::cerr << "error: link lengths must be > 0\n";
        return kExitError;
    }
    std::filesystem::create_directories(out_dir);
    const std::string spec_path = (std::filesystem::path(out_dir) / "arm_spec.json").string();
    const std::string data_path = (std::filesystem::path(out_dir) / "arm_data.csv").string();

    nniv::save_spec(nniv::make_arm_spec(epsilon), spec_path);
    nniv::write_arm_dataset({l1, l2}, data_path, samples, seed);

    json report{{"format", 1}, {"command", "gen-arm"},     {"spec", spec_path},
                {"data", data_path}, {"l1", l1},           {"l2", l2},
                {"epsilon", epsilon}, {"samples", samples}, {"seed", seed}};
    std::cout << report.dump(2) << "\n";
    return kExitSafe;
}

std::vector<double> load_image_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nniv::ParseError("image: cannot open \"" + path + "\"");
    std::vector<double> values;
    std::string token;
    while (std::getline(in, token, ',')) {
        std::istringstream field(token);
        double v = 0.0;
        if (!(field >> v) || !std::isfinite(v))
            throw nniv::ParseError("image: bad value \"" + token + "\"");
        values.push_back(v);
    }
    if (values.empty()) throw nniv::ParseError("image: no values in \"" + path + "\"");
    return values;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::istringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        std::size_t pos = 0;
        const long long v = std::stoll(token, &pos);
        if (pos != token.size() || v < 0)
            throw nniv::ParseError("--window: bad index \"" + token + "\"");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw nniv::ParseError("--window: empty index list");
    return out;
}

struct RobustFlags {
    std::string model;
    std::string image;
    std::string window;       // comma-separated pixel indices
    std::string window_rect;  // row,col,height,width (needs --image-cols)
    std::size_t image_cols = 0;
    double delta = -1.0;
    long long label = -1;
    double epsilon = 0.01;
    bool fail_fast = false;
    int jobs = 1;
    bool dump_partition = false;
    std::string out;
};

std::vector<std::size_t> resolve_window(const RobustFlags& flags, std::size_t input_dim) {
    std::vector<std::size_t> indices;
    if (!flags.window.empty() && !flags.window_rect.empty())
        throw nniv::ParseError("--window and --window-rect are mutually exclusive");
    if (!flags.window.empty()) {
        indices = parse_index_list(flags.window);
    } else if (!flags.window_rect.empty()) {
        if (flags.image_cols == 0)
            throw nniv::ParseError("--window-rect needs --image-cols");
        const std::vector<std::size_t> rect = parse_index_list(flags.window_rect);
        if (rect.size() != 4)
            throw nniv::ParseError("--window-rect wants row,col,height,width");
        for (std::size_t r = rect[0]; r < rect[0] + rect[2]; ++r)
            for (std::size_t c = rect[1]; c < rect[1] + rect[3]; ++c)
                indices.push_back(r * flags.image_cols + c);
    } else {
        throw nniv::ParseError("robust: needs --window or --window-rect");
    }
    for (std::size_t idx : indices)
        if (idx >= input_dim)
            throw nniv::DimensionError("window index " + std::to_string(idx) +
                                       " out of range for " + std::to_string(input_dim) +
                                       " inputs");
    return indices;
}

int run_robust(const RobustFlags& flags) {
    if (flags.fail_fast && flags.dump_partition) {
        std::cerr << "error: --fail-fast cannot be combined with --dump-partition\n";
        return kExitError;
    }
    if (flags.delta < 0.0) {
        std::cerr << "error: --delta must be >= 0\n";
        return kExitError;
    }
    const auto t0 = std::chrono::steady_clock::now();
    nniv::Network net = nniv::load_model(flags.model);
    const std::vector<double> image = load_image_csv(flags.image);
    if (image.size() != net.input_dim())
        throw nniv::DimensionError("image has " + std::to_string(image.size()) +
                                   " values, network expects " +
                                   std::to_string(net.input_dim()));
    if (flags.label < 0 || static_cast<std::size_t>(flags.label) >= net.output_dim())
        throw nniv::DimensionError("label " + std::to_string(flags.label) +
                                   " out of range for " + std::to_string(net.output_dim()) +
                                   " outputs");
    const std::vector<std::size_t> window = resolve_window(flags, net.input_dim());

    nniv::Box input;
    input.dims.reserve(image.size());
    for (double v : image) input.dims.push_back(nniv::Interval(v));
    for (std::size_t idx : window)
        input.dims[idx] = nniv::Interval(image[idx] - flags.delta, image[idx] + flags.delta);

    nniv::UnsafeRegion region =
        nniv::robustness_region(net.output_dim(), static_cast<std::size_t>(flags.label));

    nniv::VerifyOptions opt;
    opt.fail_fast = flags.fail_fast;
    opt.jobs = flags.jobs;
    opt.collect_partition = flags.dump_partition;
    nniv::Verdict verdict = nniv::verify(net, input, region, flags.epsilon, opt);

    json report = verdict_json(verdict, flags.dump_partition);
    report["format"] = 1;
    report["command"] = "robust";
    report["model"] = flags.model;
    report["image"] = flags.image;
    report["window"] = window;
    report["delta"] = flags.delta;
    report["label"] = flags.label;
    report["epsilon"] = flags.epsilon;
    report["input"] = nniv::box_to_json(input);
    report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(report, flags.out);
    return verdict.status == nniv::Status::safe ? kExitSafe : kExitUncertain;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval-based safety verifier for feedforward neural networks"};
    app.require_subcommand(1);

    CommonFlags verify_flags;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Verify a safety specification");
    verify_cmd->add_option("--model", verify_flags.model, "Model JSON file")->required();
    verify_cmd->add_option("--spec", verify_flags.spec, "Specification JSON file")->required();
    add_verify_flags(verify_cmd, verify_flags);

    std::string bound_model, bound_box, bound_out;
    CLI::App* bound_cmd = app.add_subcommand("bound", "Print output enclosure and width bounds");
    bound_cmd->add_option("--model", bound_model, "Model JSON file")->required();
    bound_cmd->add_option("--box", bound_box, "Input box as JSON, e.g. [[-1,1],[0,2]]")->required();
    bound_cmd->add_option("--out", bound_out, "Write the JSON report here instead of stdout");

    std::string arm_out;
    double arm_l1 = 10.0, arm_l2 = 10.0, arm_epsilon = 0.1;
    std::uint64_t arm_samples = 5000, arm_seed = 0;
    CLI::App* arm_cmd = app.add_subcommand("gen-arm", "Generate the robotic arm scenario files");
    arm_cmd->add_option("--out", arm_out, "Output directory")->required();
    arm_cmd->add_option("--l1", arm_l1, "First link length")->default_val(10.0);
    arm_cmd->add_option("--l2", arm_l2, "Second link length")->default_val(10.0);
    arm_cmd->add_option("--epsilon", arm_epsilon, "Tolerance stored in the spec file")->default_val(0.1);
    arm_cmd->add_option("--samples", arm_samples, "Dataset rows")->default_val(5000);
    arm_cmd->add_option("--seed", arm_seed, "Dataset sampling seed")->default_val(0);

    RobustFlags robust_flags;
    CLI::App* robust_cmd = app.add_subcommand("robust", "Certify robustness to windowed perturbations");
    robust_cmd->add_option("--model", robust_flags.model, "Model JSON file")->required();
    robust_cmd->add_option("--image", robust_flags.image, "Input point as a one-line CSV")->required();
    robust_cmd->add_option("--window", robust_flags.window, "Perturbed input indices, e.g. 0,1,21");
    robust_cmd->add_option("--window-rect", robust_flags.window_rect, "row,col,height,width rectangle");
    robust_cmd->add_option("--image-cols", robust_flags.image_cols, "Row stride for --window-rect");
    robust_cmd->add_option("--delta", robust_flags.delta, "Perturbation half-width")->required();
    robust_cmd->add_option("--label", robust_flags.label, "True class index")->required();
    robust_cmd->add_option("--epsilon", robust_flags.epsilon, "Bisection width tolerance")->default_val(0.01);
    robust_cmd->add_flag("--fail-fast", robust_flags.fail_fast, "Stop at the first witness box");
    robust_cmd->add_option("--jobs", robust_flags.jobs, "Worker threads")->default_val(1);
    robust_cmd->add_flag("--dump-partition", robust_flags.dump_partition, "Include the leaf partition");
    robust_cmd->add_option("--out", robust_flags.out, "Write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (verify_cmd->parsed()) return run_verify(verify_flags);
        if (bound_cmd->parsed()) return run_bound(bound_model, bound_box, bound_out);
        if (arm_cmd->parsed())
            return run_gen_arm(arm_out, arm_l1, arm_l2, arm_epsilon, arm_samples, arm_seed);
        if (robust_cmd->parsed()) return run_robust(robust_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
