#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks of the hsad binary: exit codes, artifact layout, and
// determinism. The binary path comes from the build system.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* kCli = HSAD_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = std::string(kCli) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::vector<char> slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string slurp_text(const fs::path& path) {
    auto bytes = slurp(path);
    return {bytes.begin(), bytes.end()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hsad_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const char* kSceneConfig = R"(lines = 24
samples = 30
bands = 32
seed = 4242

[background]
model = correlated
mean = ramp 0.3 0.6
stddev = constant 0.08
correlation = 0.9

[implant]
row = 6
col = 7
footprint = 2x2
spectrum = peaks 0.2 0.6 0.3 0.08
fraction = 0.55
adjacency_radius = 1
adjacency_width = 1.0

[implant]
row = 15
col = 20
spectrum = constant 0.9
fraction = 0.55
adjacency_radius = 0
)";

void write_scene_config(const std::string& path) {
    std::ofstream out(path);
    out << kSceneConfig;
}

} // namespace

TEST_CASE("full pipeline: generate, reduce, detect, evaluate") {
    TempDir dir;
    write_scene_config(dir / "scene.cfg");

    REQUIRE(run("generate " + (dir / "scene.cfg") + " " + (dir / "img")) == 0);
    CHECK(fs::exists(dir / "img.hdr"));
    CHECK(fs::exists(dir / "img.raw"));
    CHECK(fs::exists(dir / "img_truth.pgm"));
    CHECK(fs::exists(dir / "img_manifest.json"));
    // 24*30*32 f64 values
    CHECK(fs::file_size(dir / "img.raw") == 24u * 30u * 32u * 8u);

    REQUIRE(run("reduce " + (dir / "img") + " " + (dir / "img4")) == 0);
    CHECK(fs::file_size(dir / "img4.raw") == 24u * 30u * 4u * 8u);

    REQUIRE(run("detect " + (dir / "img4") + " " + (dir / "out") + " --algo lrx --window 9") == 0);
    CHECK(fs::exists(dir / "out_scores.hdr"));
    CHECK(fs::exists(dir / "out_scores.raw"));
    CHECK(fs::exists(dir / "out_scores.pgm"));
    CHECK(fs::file_size(dir / "out_scores.raw") == 24u * 30u * 4u);

    REQUIRE(run("evaluate " + (dir / "out_scores") + " " + (dir / "img_truth.pgm") + " " +
                (dir / "eval")) == 0);
    const std::string roc = slurp_text(dir / "eval_roc.csv");
    CHECK(roc.rfind("far,td\n", 0) == 0);
    CHECK(roc.find("# auc=") != std::string::npos);
    CHECK(fs::exists(dir / "eval_mask.pgm"));
}

TEST_CASE("generate is byte-deterministic across runs") {
    TempDir dir;
    write_scene_config(dir / "scene.cfg");
    REQUIRE(run("generate " + (dir / "scene.cfg") + " " + (dir / "a")) == 0);
    REQUIRE(run("generate " + (dir / "scene.cfg") + " " + (dir / "b")) == 0);
    CHECK(slurp(dir / "a.raw") == slurp(dir / "b.raw"));
    CHECK(slurp(dir / "a.hdr") == slurp(dir / "b.hdr"));
    CHECK(slurp(dir / "a_truth.pgm") == slurp(dir / "b_truth.pgm"));
}

TEST_CASE("detect scores are identical at any worker count") {
    TempDir dir;
    write_scene_config(dir / "scene.cfg");
    REQUIRE(run("generate " + (dir / "scene.cfg") + " " + (dir / "img")) == 0);
    REQUIRE(run("reduce " + (dir / "img") + " " + (dir / "img4")) == 0);
    REQUIRE(run("detect " + (dir / "img4") + " " + (dir / "w1") +
                " --algo dwrx --inner 3 --outer 9 --workers 1") == 0);
    REQUIRE(run("detect " + (dir / "img4") + " " + (dir / "w4") +
                " --algo dwrx --inner 3 --outer 9 --workers 4") == 0);
    CHECK(slurp(dir / "w1_scores.raw") == slurp(dir / "w4_scores.raw"));
}

TEST_CASE("exit codes distinguish input, usage and config errors") {
    TempDir dir;
    write_scene_config(dir / "scene.cfg");
    REQUIRE(run("generate " + (dir / "scene.cfg") + " " + (dir / "img")) == 0);

    // input/config errors -> 1
    CHECK(run("generate " + (dir / "missing.cfg") + " " + (dir / "x")) == 1);
    CHECK(run("reduce " + (dir / "img") + " " + (dir / "x") + " --target-bands 3") == 1);
    CHECK(run("reduce " + (dir / "img") + " " + (dir / "x") + " --wavelet-order 40") == 1);
    CHECK(run("detect " + (dir / "img") + " " + (dir / "x") + " --algo nosuch") == 1);

    // flag mismatch -> 2
    CHECK(run("detect " + (dir / "img") + " " + (dir / "x") + " --algo lrx --inner 5") == 2);
    CHECK(run("detect " + (dir / "img") + " " + (dir / "x") + " --algo dwest --window 15") == 2);

    // usage errors -> 2
    CHECK(run("frobnicate") == 2);
    CHECK(run("detect") == 2);
}

TEST_CASE("singular covariance at ridge zero exits 3") {
    TempDir dir;
    // constant background, one hot pixel: its window has zero covariance
    // trace, so no ridge can be applied and inversion must fail
    std::ofstream out(dir / "flat.cfg");
    out << "lines = 12\nsamples = 12\nbands = 3\nseed = 2\n[background]\nmodel = gaussian_iid\n"
           "mean = constant 0.5\nstddev = constant 0\n[implant]\nrow = 6\ncol = 6\n"
           "spectrum = constant 2\nfraction = 1\nadjacency_radius = 0\n";
    out.close();
    REQUIRE(run("generate " + (dir / "flat.cfg") + " " + (dir / "flat")) == 0);
    CHECK(run("detect " + (dir / "flat") + " " + (dir / "x") +
              " --algo lrx --window 5 --ridge 0") == 3);
}

TEST_CASE("out-of-bounds implant names the implant and exits 1") {
    TempDir dir;
    std::ofstream out(dir / "bad.cfg");
    out << "lines = 8\nsamples = 8\nbands = 4\nseed = 1\n[background]\nmodel = gaussian_iid\n"
           "mean = constant 0.5\nstddev = constant 0.1\n[implant]\nrow = 7\ncol = 7\n"
           "footprint = 2x2\nspectrum = constant 1\n";
    out.close();
    CHECK(run("generate " + (dir / "bad.cfg") + " " + (dir / "x")) == 1);
}

TEST_CASE("bench emits the requested matrix") {
    TempDir dir;
    write_scene_config(dir / "scene.cfg");
    REQUIRE(run("bench " + (dir / "scene.cfg") + " " + (dir / "bench") +
                " --cells lrx:raw:9,lrx:dwt:9,dwrx:dwt:3/9 --workers 1") == 0);
    const std::string csv = slurp_text(dir / "bench_bench.csv");
    CHECK(csv.rfind("algorithm,preprocessing,window,auc,preprocess_seconds,detect_seconds,"
                    "total_seconds\n", 0) == 0);
    CHECK(csv.find("\nlrx,raw,9,") != std::string::npos);
    CHECK(csv.find("\nlrx,dwt,9,") != std::string::npos);
    CHECK(csv.find("\ndwrx,dwt,3/9,") != std::string::npos);
    CHECK(csv.find("# workers=1") != std::string::npos);

    // empty matrix: header-only CSV, exit 0
    REQUIRE(run("bench " + (dir / "scene.cfg") + " " + (dir / "empty") + " --cells ,") == 0);
    const std::string empty_csv = slurp_text(dir / "empty_bench.csv");
    CHECK(empty_csv.rfind("algorithm,preprocessing,window,auc", 0) == 0);
}

TEST_CASE("rerun replays a manifest byte-identically") {
    TempDir dir;
    write_scene_config(dir / "scene.cfg");
    REQUIRE(run("generate " + (dir / "scene.cfg") + " " + (dir / "img")) == 0);
    REQUIRE(run("rerun " + (dir / "img_manifest.json") + " --output-prefix " + (dir / "img2")) ==
            0);
    CHECK(slurp(dir / "img.raw") == slurp(dir / "img2.raw"));
    CHECK(slurp(dir / "img_truth.pgm") == slurp(dir / "img2_truth.pgm"));

    REQUIRE(run("detect " + (dir / "img") + " " + (dir / "d1") +
                " --algo dwest --inner 3 --outer 9") == 0);
    REQUIRE(run("rerun " + (dir / "d1_manifest.json") + " --output-prefix " + (dir / "d2")) == 0);
    CHECK(slurp(dir / "d1_scores.raw") == slurp(dir / "d2_scores.raw"));
    CHECK(slurp(dir / "d1_scores.pgm") == slurp(dir / "d2_scores.pgm"));
}

TEST_CASE("evaluate rejects mismatched dimensions with exit 2") {
    TempDir dir;
    write_scene_config(dir / "scene.cfg");
    REQUIRE(run("generate " + (dir / "scene.cfg") + " " + (dir / "img")) == 0);
    REQUIRE(run("detect " + (dir / "img") + " " + (dir / "d") + " --algo lrx --window 9") == 0);

    // truth of the wrong size
    std::ofstream out(dir / "small.pgm", std::ios::binary);
    out << "P5\n2 2\n255\n";
    const char pixels[4] = {0, (char)255, 0, 0};
    out.write(pixels, 4);
    out.close();
    CHECK(run("evaluate " + (dir / "d_scores") + " " + (dir / "small.pgm") + " " + (dir / "e")) ==
          2);
}
