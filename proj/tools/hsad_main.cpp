// hsad command-line front end: scene generation, spectral reduction,
// detection, evaluation, and the benchmark matrix. Every command writes a
// JSON manifest recording the parameters that produced its outputs; `rerun`
// replays a manifest.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsad/detect.hpp"
#include "hsad/eval.hpp"
#include "hsad/synth.hpp"
#include "hsad/wavelet.hpp"

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr const char* kVersion = "0.1.0";

int exit_code_for(const hsad::Error& e) {
    switch (e.code()) {
    case hsad::errc::config_mismatch:
    case hsad::errc::dimension_mismatch:
        return 2;
    case hsad::errc::singular_after_ridge:
    case hsad::errc::no_convergence:
        return 3;
    default:
        return 1;
    }
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw hsad::Error(hsad::errc::io_failure, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw hsad::Error(hsad::errc::io_failure, "cannot open " + path.string());
    out << text;
    if (!out) throw hsad::Error(hsad::errc::io_failure, "short write to " + path.string());
}

void write_bytes_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw hsad::Error(hsad::errc::io_failure, "cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

ordered_json new_manifest(const std::string& command) {
    ordered_json m;
    m["tool"] = "hsad";
    m["version"] = kVersion;
    m["command"] = command;
    return m;
}

void save_manifest(const ordered_json& manifest, const std::string& prefix) {
    write_text_file(prefix + "_manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------- generate

int run_generate(const std::string& config_text, const std::string& prefix) {
    hsad::SceneConfig config = hsad::parse_scene_config(config_text);
    const auto start = Clock::now();
    auto [cube, truth] = hsad::generate_scene(config);
    const double gen_seconds = seconds_since(start);

    hsad::save_cube(cube, prefix, hsad::Interleave::BSQ);
    hsad::save_pgm(hsad::mask_to_pgm(truth), prefix + "_truth.pgm");

    ordered_json manifest = new_manifest("generate");
    manifest["parameters"] = {{"config_text", config_text},
                              {"seed", config.rng_seed},
                              {"lines", config.lines},
                              {"samples", config.samples},
                              {"bands", config.bands},
                              {"implants", config.implants.size()}};
    manifest["outputs"] = {{"cube_header", prefix + ".hdr"},
                           {"cube_raw", prefix + ".raw"},
                           {"truth", prefix + "_truth.pgm"}};
    manifest["timing"] = {{"generate_seconds", gen_seconds}};
    save_manifest(manifest, prefix);

    std::cout << "generated " << config.lines << "x" << config.samples << "x" << config.bands
              << " scene with " << truth.positive_count() << " anomaly pixels -> " << prefix
              << ".{hdr,raw}\n";
    return 0;
}

// ------------------------------------------------------------------ reduce

int run_reduce(const std::string& input, const std::string& prefix, int order, int target_bands,
               int workers) {
    hsad::HyperCube cube = hsad::load_cube(input);
    auto filters = hsad::daubechies_filters(order);
    const auto start = Clock::now();
    hsad::HyperCube reduced = hsad::reduce_cube(cube, filters, target_bands, workers);
    const double dwt_seconds = seconds_since(start);
    hsad::save_cube(reduced, prefix, hsad::Interleave::BSQ);

    ordered_json manifest = new_manifest("reduce");
    manifest["inputs"] = {{"cube", input}};
    manifest["parameters"] = {{"wavelet_order", order},
                              {"target_bands", target_bands},
                              {"workers", workers}};
    manifest["outputs"] = {{"cube_header", prefix + ".hdr"}, {"cube_raw", prefix + ".raw"}};
    manifest["timing"] = {{"preprocess_seconds", dwt_seconds}};
    save_manifest(manifest, prefix);

    std::cout << "reduced " << cube.bands() << " bands to " << reduced.bands() << " in "
              << dwt_seconds << " s -> " << prefix << ".{hdr,raw}\n";
    return 0;
}

// ------------------------------------------------------------------ detect

struct DetectArgs {
    std::string input;
    std::string prefix;
    std::string algo = "lrx";
    std::optional<int> window;
    std::optional<int> inner;
    std::optional<int> outer;
    double ridge = 1e-6;
    double eigen_fraction = 0.1;
    int workers = 1;
};

int run_detect(const DetectArgs& args) {
    const hsad::Algorithm algo = hsad::algorithm_from_name(args.algo);

    hsad::WindowConfig window;
    if (algo == hsad::Algorithm::LRX) {
        if (args.inner || args.outer)
            throw hsad::Error(hsad::errc::config_mismatch,
                              "lrx takes --window, not --inner/--outer");
        window = hsad::WindowConfig::single(args.window.value_or(15));
    } else {
        if (args.window)
            throw hsad::Error(hsad::errc::config_mismatch,
                              args.algo + " takes --inner/--outer, not --window");
        window = hsad::WindowConfig::dual(args.inner.value_or(5), args.outer.value_or(13));
    }

    hsad::HyperCube cube = hsad::load_cube(args.input);
    hsad::DetectOptions options;
    options.ridge = args.ridge;
    options.dwest.eigen_fraction = args.eigen_fraction;
    options.workers = args.workers;
    hsad::ScoreMap map = hsad::detect(cube, algo, window, options);

    hsad::save_score_map(map, args.prefix + "_scores");
    write_bytes_file(args.prefix + "_scores.pgm", hsad::render_pgm(map));

    ordered_json manifest = new_manifest("detect");
    manifest["inputs"] = {{"cube", args.input}};
    ordered_json params = {{"algo", args.algo},
                           {"ridge", args.ridge},
                           {"eigen_fraction", args.eigen_fraction},
                           {"workers", args.workers}};
    if (algo == hsad::Algorithm::LRX) {
        params["window"] = window.single_size;
    } else {
        params["inner"] = window.inner_size;
        params["outer"] = window.outer_size;
    }
    manifest["parameters"] = params;
    manifest["outputs"] = {{"scores_header", args.prefix + "_scores.hdr"},
                           {"scores_raw", args.prefix + "_scores.raw"},
                           {"render", args.prefix + "_scores.pgm"}};
    manifest["timing"] = {{"detect_seconds", map.seconds}};
    save_manifest(manifest, args.prefix);

    std::cout << map.algorithm << " (window " << map.window << ") on " << cube.lines() << "x"
              << cube.samples() << "x" << cube.bands() << " in " << map.seconds << " s -> "
              << args.prefix << "_scores.{hdr,raw,pgm}\n";
    return 0;
}

// ---------------------------------------------------------------- evaluate

int run_evaluate(const std::string& scores_path, const std::string& truth_path,
                 const std::string& prefix, double z_alpha) {
    hsad::ScoreMap scores = hsad::load_score_map(scores_path);
    hsad::GroundTruthMask truth = hsad::mask_from_pgm(hsad::load_pgm(truth_path));

    hsad::RocCurve curve = hsad::roc_curve(scores, truth);
    hsad::ThresholdResult threshold = hsad::adaptive_threshold(scores, z_alpha);

    write_text_file(prefix + "_roc.csv", hsad::roc_to_csv(curve));
    hsad::save_pgm(hsad::mask_to_pgm(threshold.mask), prefix + "_mask.pgm");

    ordered_json manifest = new_manifest("evaluate");
    manifest["inputs"] = {{"scores", scores_path}, {"truth", truth_path}};
    manifest["parameters"] = {{"z_alpha", z_alpha}};
    manifest["outputs"] = {{"roc", prefix + "_roc.csv"}, {"mask", prefix + "_mask.pgm"}};
    manifest["results"] = {{"auc", curve.auc},
                           {"tau", threshold.tau},
                           {"declared", threshold.mask.positive_count()}};
    save_manifest(manifest, prefix);

    std::cout << "auc=" << curve.auc << " tau=" << threshold.tau << " declared="
              << threshold.mask.positive_count() << " -> " << prefix << "_roc.csv\n";
    return 0;
}

// ------------------------------------------------------------------- bench

struct BenchCell {
    std::string algo;
    std::string preprocessing; // "raw" or "dwt"
    std::string window;        // "15" or "5/13"
};

std::vector<BenchCell> parse_cells(const std::string& list) {
    std::vector<BenchCell> cells;
    std::stringstream stream(list);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        BenchCell cell;
        const auto c1 = item.find(':');
        const auto c2 = item.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw hsad::Error(hsad::errc::invalid_value,
                              "bench cell '" + item + "' is not algo:pre:window");
        cell.algo = item.substr(0, c1);
        cell.preprocessing = item.substr(c1 + 1, c2 - c1 - 1);
        cell.window = item.substr(c2 + 1);
        hsad::algorithm_from_name(cell.algo); // validates
        if (cell.preprocessing != "raw" && cell.preprocessing != "dwt")
            throw hsad::Error(hsad::errc::invalid_value,
                              "bench preprocessing must be raw or dwt, got '" +
                                  cell.preprocessing + "'");
        cells.push_back(std::move(cell));
    }
    return cells;
}

hsad::WindowConfig window_for(const BenchCell& cell) {
    const auto slash = cell.window.find('/');
    if (cell.algo == "lrx") {
        if (slash != std::string::npos)
            throw hsad::Error(hsad::errc::config_mismatch, "lrx window must be a single size");
        return hsad::WindowConfig::single(std::stoi(cell.window));
    }
    if (slash == std::string::npos)
        throw hsad::Error(hsad::errc::config_mismatch,
                          cell.algo + " window must be inner/outer");
    return hsad::WindowConfig::dual(std::stoi(cell.window.substr(0, slash)),
                                    std::stoi(cell.window.substr(slash + 1)));
}

struct BenchArgs {
    std::string config_path;
    std::string prefix;
    std::string cells =
        "lrx:raw:15,lrx:dwt:15,dwrx:raw:5/13,dwrx:dwt:5/13,dwest:raw:5/13,dwest:dwt:5/13";
    int workers = 1;
    int wavelet_order = 2;
    int target_bands = 4;
    double ridge = 1e-6;
    double eigen_fraction = 0.1;
};

int run_bench_from_text(const std::string& config_text, const BenchArgs& args) {
    const std::vector<BenchCell> cells = parse_cells(args.cells);

    hsad::SceneConfig scene_config = hsad::parse_scene_config(config_text);
    auto [cube, truth] = hsad::generate_scene(scene_config);

    // DWT preprocessing runs once; its cost is charged to every dwt cell
    double dwt_seconds = 0.0;
    hsad::HyperCube reduced;
    const bool any_dwt = std::any_of(cells.begin(), cells.end(), [](const BenchCell& c) {
        return c.preprocessing == "dwt";
    });
    if (any_dwt) {
        auto filters = hsad::daubechies_filters(args.wavelet_order);
        const auto start = Clock::now();
        reduced = hsad::reduce_cube(cube, filters, args.target_bands, args.workers);
        dwt_seconds = seconds_since(start);
    }

    std::string csv = "algorithm,preprocessing,window,auc,preprocess_seconds,detect_seconds,"
                      "total_seconds\n";
    std::vector<std::string> failures;
    char row[256];
    for (const auto& cell : cells) {
        try {
            const hsad::HyperCube& input = cell.preprocessing == "dwt" ? reduced : cube;
            hsad::DetectOptions options;
            options.ridge = args.ridge;
            options.dwest.eigen_fraction = args.eigen_fraction;
            options.workers = args.workers;
            hsad::ScoreMap map = hsad::detect(input, hsad::algorithm_from_name(cell.algo),
                                              window_for(cell), options);
            const double auc_value = hsad::roc_curve(map, truth).auc;
            const double pre = cell.preprocessing == "dwt" ? dwt_seconds : 0.0;
            std::snprintf(row, sizeof(row), "%s,%s,%s,%.6f,%.6f,%.6f,%.6f\n", cell.algo.c_str(),
                          cell.preprocessing.c_str(), cell.window.c_str(), auc_value, pre,
                          map.seconds, pre + map.seconds);
            csv += row;
            std::cout << cell.algo << "/" << cell.preprocessing << " window " << cell.window
                      << ": auc=" << auc_value << " detect=" << map.seconds << " s\n";
        } catch (const hsad::Error& e) {
            std::snprintf(row, sizeof(row), "%s,%s,%s,nan,nan,nan,nan\n", cell.algo.c_str(),
                          cell.preprocessing.c_str(), cell.window.c_str());
            csv += row;
            failures.push_back(cell.algo + ":" + cell.preprocessing + " " + e.what());
        }
    }
    csv += "# workers=" + std::to_string(args.workers) + "\n";
    for (const auto& f : failures) csv += "# error " + f + "\n";
    write_text_file(args.prefix + "_bench.csv", csv);

    ordered_json manifest = new_manifest("bench");
    manifest["parameters"] = {{"config_text", config_text},
                              {"cells", args.cells},
                              {"workers", args.workers},
                              {"wavelet_order", args.wavelet_order},
                              {"target_bands", args.target_bands},
                              {"ridge", args.ridge},
                              {"eigen_fraction", args.eigen_fraction}};
    manifest["outputs"] = {{"table", args.prefix + "_bench.csv"}};
    manifest["timing"] = {{"preprocess_seconds", dwt_seconds}};
    save_manifest(manifest, args.prefix);

    if (!failures.empty())
        std::cerr << failures.size() << " cell(s) failed; see table comments\n";
    return 0;
}

int run_bench(const BenchArgs& args) {
    return run_bench_from_text(read_text_file(args.config_path), args);
}

// ------------------------------------------------------------------- rerun

int run_rerun(const std::string& manifest_path, const std::string& prefix_override) {
    ordered_json manifest;
    {
        std::ifstream in(manifest_path);
        if (!in) throw hsad::Error(hsad::errc::io_failure, "cannot open " + manifest_path);
        in >> manifest;
    }
    const std::string command = manifest.value("command", "");
    const auto params = manifest["parameters"];

    // the original output prefix is the manifest path minus "_manifest.json"
    std::string prefix = prefix_override;
    if (prefix.empty()) {
        prefix = manifest_path;
        const std::string suffix = "_manifest.json";
        if (prefix.size() > suffix.size() &&
            prefix.compare(prefix.size() - suffix.size(), suffix.size(), suffix) == 0)
            prefix.resize(prefix.size() - suffix.size());
        else
            throw hsad::Error(hsad::errc::invalid_value,
                              "cannot infer output prefix; pass --output-prefix");
    }

    if (command == "generate") {
        return run_generate(params.at("config_text").get<std::string>(), prefix);
    }
    if (command == "reduce") {
        return run_reduce(manifest.at("inputs").at("cube").get<std::string>(), prefix,
                          params.at("wavelet_order").get<int>(),
                          params.at("target_bands").get<int>(), params.at("workers").get<int>());
    }
    if (command == "detect") {
        DetectArgs args;
        args.input = manifest.at("inputs").at("cube").get<std::string>();
        args.prefix = prefix;
        args.algo = params.at("algo").get<std::string>();
        if (params.contains("window")) args.window = params.at("window").get<int>();
        if (params.contains("inner")) args.inner = params.at("inner").get<int>();
        if (params.contains("outer")) args.outer = params.at("outer").get<int>();
        args.ridge = params.at("ridge").get<double>();
        args.eigen_fraction = params.at("eigen_fraction").get<double>();
        args.workers = params.at("workers").get<int>();
        return run_detect(args);
    }
    if (command == "evaluate") {
        return run_evaluate(manifest.at("inputs").at("scores").get<std::string>(),
                            manifest.at("inputs").at("truth").get<std::string>(), prefix,
                            params.at("z_alpha").get<double>());
    }
    if (command == "bench") {
        BenchArgs args;
        args.prefix = prefix;
        args.cells = params.at("cells").get<std::string>();
        args.workers = params.at("workers").get<int>();
        args.wavelet_order = params.at("wavelet_order").get<int>();
        args.target_bands = params.at("target_bands").get<int>();
        args.ridge = params.at("ridge").get<double>();
        args.eigen_fraction = params.at("eigen_fraction").get<double>();
        return run_bench_from_text(params.at("config_text").get<std::string>(), args);
    }
    throw hsad::Error(hsad::errc::invalid_value, "manifest has unknown command '" + command + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperspectral anomaly detection toolkit"};
    app.set_version_flag("--version", std::string("hsad ") + kVersion);
    app.require_subcommand(1);

    // generate
    std::string gen_config, gen_prefix;
    auto* gen = app.add_subcommand("generate", "synthesize a scene with ground truth");
    gen->add_option("config", gen_config, "scene description file")->required();
    gen->add_option("output-prefix", gen_prefix, "output path prefix")->required();

    // reduce
    std::string red_input, red_prefix;
    int red_order = 2, red_bands = 4, red_workers = 1;
    auto* red = app.add_subcommand("reduce", "replace spectra by wavelet approximations");
    red->add_option("cube", red_input, "input cube (.hdr or prefix)")->required();
    red->add_option("output-prefix", red_prefix, "output path prefix")->required();
    red->add_option("--wavelet-order", red_order, "Daubechies order (1..10)");
    red->add_option("--target-bands", red_bands, "approximation length (power of two)");
    red->add_option("--workers", red_workers, "worker threads");

    // detect
    DetectArgs det;
    int det_window = 15, det_inner = 5, det_outer = 13;
    auto* detc = app.add_subcommand("detect", "run an anomaly detector over a cube");
    detc->add_option("cube", det.input, "input cube (.hdr or prefix)")->required();
    detc->add_option("output-prefix", det.prefix, "output path prefix")->required();
    detc->add_option("--algo", det.algo, "lrx | dwrx | dwest")->required();
    auto* opt_window = detc->add_option("--window", det_window, "single window size (lrx)");
    auto* opt_inner = detc->add_option("--inner", det_inner, "inner window size");
    auto* opt_outer = detc->add_option("--outer", det_outer, "outer window size");
    detc->add_option("--ridge", det.ridge, "trace-relative diagonal loading");
    detc->add_option("--eigen-fraction", det.eigen_fraction, "dwest eigenvalue cut");
    detc->add_option("--workers", det.workers, "worker threads");

    // evaluate
    std::string eval_scores, eval_truth, eval_prefix;
    double eval_z = 1.645;
    auto* eval = app.add_subcommand("evaluate", "score map vs truth: ROC, AUC, threshold mask");
    eval->add_option("scores", eval_scores, "score map (.hdr or prefix)")->required();
    eval->add_option("truth", eval_truth, "ground truth PGM")->required();
    eval->add_option("output-prefix", eval_prefix, "output path prefix")->required();
    eval->add_option("--z-alpha", eval_z, "threshold z statistic");

    // bench
    BenchArgs bench;
    auto* ben = app.add_subcommand("bench", "detector matrix on one scene: AUC and runtimes");
    ben->add_option("config", bench.config_path, "scene description file")->required();
    ben->add_option("output-prefix", bench.prefix, "output path prefix")->required();
    ben->add_option("--cells", bench.cells, "comma list of algo:pre:window cells");
    ben->add_option("--workers", bench.workers, "worker threads");
    ben->add_option("--wavelet-order", bench.wavelet_order, "Daubechies order");
    ben->add_option("--target-bands", bench.target_bands, "approximation length");
    ben->add_option("--ridge", bench.ridge, "trace-relative diagonal loading");
    ben->add_option("--eigen-fraction", bench.eigen_fraction, "dwest eigenvalue cut");

    // rerun
    std::string rerun_manifest, rerun_prefix;
    auto* rer = app.add_subcommand("rerun", "replay a command from its manifest");
    rer->add_option("manifest", rerun_manifest, "path to a *_manifest.json")->required();
    rer->add_option("--output-prefix", rerun_prefix, "redirect outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors
    }

    try {
        if (gen->parsed()) return run_generate(read_text_file(gen_config), gen_prefix);
        if (red->parsed())
            return run_reduce(red_input, red_prefix, red_order, red_bands, red_workers);
        if (detc->parsed()) {
            if (opt_window->count()) det.window = det_window;
            if (opt_inner->count()) det.inner = det_inner;
            if (opt_outer->count()) det.outer = det_outer;
            return run_detect(det);
        }
        if (eval->parsed()) return run_evaluate(eval_scores, eval_truth, eval_prefix, eval_z);
        if (ben->parsed()) return run_bench(bench);
        if (rer->parsed()) return run_rerun(rerun_manifest, rerun_prefix);
    } catch (const hsad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
