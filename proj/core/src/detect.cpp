#include "hsad/detect.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

#include "parallel.hpp"

namespace hsad {

const char* algorithm_name(Algorithm algo) noexcept {
    switch (algo) {
    case Algorithm::LRX: return "lrx";
    case Algorithm::DWRX: return "dwrx";
    case Algorithm::DWEST: return "dwest";
    }
    return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "lrx") return Algorithm::LRX;
    if (name == "dwrx") return Algorithm::DWRX;
    if (name == "dwest") return Algorithm::DWEST;
    throw Error(errc::invalid_value, "unknown algorithm '" + name + "'");
}

WindowConfig WindowConfig::single(int size) {
    WindowConfig c;
    c.mode = Mode::Single;
    c.single_size = size;
    c.validate();
    return c;
}

WindowConfig WindowConfig::dual(int inner, int outer) {
    WindowConfig c;
    c.mode = Mode::Dual;
    c.inner_size = inner;
    c.outer_size = outer;
    c.validate();
    return c;
}

void WindowConfig::validate() const {
    if (mode == Mode::Single) {
        if (single_size < 3 || single_size % 2 == 0)
            throw Error(errc::invalid_value,
                        "single window size must be odd and >= 3, got " +
                            std::to_string(single_size));
        return;
    }
    if (inner_size < 1 || inner_size % 2 == 0)
        throw Error(errc::invalid_value,
                    "inner window size must be odd and >= 1, got " + std::to_string(inner_size));
    if (outer_size <= inner_size || outer_size % 2 == 0)
        throw Error(errc::invalid_value,
                    "outer window size must be odd and > inner, got " + std::to_string(outer_size));
    if (outer_size - inner_size < 2)
        throw Error(errc::invalid_value, "outer window must exceed inner by at least 2");
    if (outer_size * outer_size - inner_size * inner_size < 2)
        throw Error(errc::invalid_value, "outer annulus must contain at least 2 pixels");
}

std::string WindowConfig::describe() const {
    if (mode == Mode::Single) return std::to_string(single_size);
    return std::to_string(inner_size) + "/" + std::to_string(outer_size);
}

int mirror_index(int i, int n) noexcept {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

namespace {

// Fills one column per window pixel; `skip_center` drops the window's
// central position (not its value — mirrored duplicates may still occur
// near corners).
void gather_box(const HyperCube& cube, int row, int col, int size, bool skip_center,
                Eigen::MatrixXd& out) {
    const int bands = cube.bands();
    const int half = size / 2;
    const int count = size * size - (skip_center ? 1 : 0);
    out.resize(bands, count);
    int idx = 0;
    for (int dr = -half; dr <= half; ++dr) {
        const int rr = mirror_index(row + dr, cube.lines());
        for (int dc = -half; dc <= half; ++dc) {
            if (skip_center && dr == 0 && dc == 0) continue;
            const int cc = mirror_index(col + dc, cube.samples());
            auto px = cube.pixel(rr, cc);
            out.col(idx++) = Eigen::Map<const Eigen::VectorXd>(px.data(), bands);
        }
    }
}

void gather_annulus(const HyperCube& cube, int row, int col, int inner, int outer,
                    Eigen::MatrixXd& out) {
    const int bands = cube.bands();
    const int ihalf = inner / 2;
    const int ohalf = outer / 2;
    out.resize(bands, outer * outer - inner * inner);
    int idx = 0;
    for (int dr = -ohalf; dr <= ohalf; ++dr) {
        const int rr = mirror_index(row + dr, cube.lines());
        for (int dc = -ohalf; dc <= ohalf; ++dc) {
            if (std::abs(dr) <= ihalf && std::abs(dc) <= ihalf) continue;
            const int cc = mirror_index(col + dc, cube.samples());
            auto px = cube.pixel(rr, cc);
            out.col(idx++) = Eigen::Map<const Eigen::VectorXd>(px.data(), bands);
        }
    }
}

void require_mode(const WindowConfig& config, WindowConfig::Mode mode, const char* algo) {
    config.validate();
    if (config.mode != mode)
        throw Error(errc::config_mismatch,
                    std::string(algo) + " requires a " +
                        (mode == WindowConfig::Mode::Single ? "single" : "dual") + " window");
}

[[noreturn]] void rethrow_at_pixel(const Error& e, int row, int col) {
    throw Error(e.code(), std::string(e.what()) + " at pixel (" + std::to_string(row) + ", " +
                              std::to_string(col) + ")");
}

ScoreMap make_map(const HyperCube& cube, Algorithm algo, const WindowConfig& config) {
    ScoreMap map;
    map.lines = cube.lines();
    map.samples = cube.samples();
    map.scores.assign(static_cast<std::size_t>(map.lines) * map.samples, 0.0);
    map.algorithm = algorithm_name(algo);
    map.window = config.describe();
    return map;
}

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

std::pair<SampleSet, SampleSet> dual_window_samples(const HyperCube& cube, int row, int col,
                                                    const WindowConfig& config) {
    require_mode(config, WindowConfig::Mode::Dual, "dual_window_samples");
    SampleSet inner, outer;
    gather_box(cube, row, col, config.inner_size, false, inner.vectors);
    gather_annulus(cube, row, col, config.inner_size, config.outer_size, outer.vectors);
    return {std::move(inner), std::move(outer)};
}

ScoreMap local_rx(const HyperCube& cube, const WindowConfig& config, double ridge, int workers) {
    require_mode(config, WindowConfig::Mode::Single, "local_rx");
    const auto start = Clock::now();
    ScoreMap map = make_map(cube, Algorithm::LRX, config);
    map.ridge = ridge;
    map.workers = workers;

    detail::parallel_rows(cube.lines(), workers, [&](int row) {
        Eigen::MatrixXd background;
        for (int col = 0; col < cube.samples(); ++col) {
            gather_box(cube, row, col, config.single_size, true, background);
            SampleSet bg{std::move(background)};
            Spectrum mu = mean_vector(bg);
            Eigen::Map<const Eigen::VectorXd> r(cube.pixel(row, col).data(), cube.bands());
            Eigen::VectorXd diff = r - mu;
            double score = 0.0;
            if (diff.cwiseAbs().maxCoeff() > 0.0) {
                // only a nonzero displacement needs the inverse; this keeps
                // flat neighborhoods (zero covariance, zero trace) legal
                try {
                    CovarianceMatrix inv = regularized_inverse(covariance(bg, mu), ridge);
                    score = diff.dot(inv.entries * diff);
                } catch (const Error& e) {
                    rethrow_at_pixel(e, row, col);
                }
            }
            map.scores[static_cast<std::size_t>(row) * map.samples + col] =
                std::max(score, 0.0); // clamp roundoff on a PD quadratic form
            background = std::move(bg.vectors);
        }
    });

    map.seconds = elapsed_seconds(start);
    return map;
}

ScoreMap dwrx(const HyperCube& cube, const WindowConfig& config, double ridge, int workers) {
    require_mode(config, WindowConfig::Mode::Dual, "dwrx");
    const auto start = Clock::now();
    ScoreMap map = make_map(cube, Algorithm::DWRX, config);
    map.ridge = ridge;
    map.workers = workers;

    detail::parallel_rows(cube.lines(), workers, [&](int row) {
        Eigen::MatrixXd inner_box, annulus;
        for (int col = 0; col < cube.samples(); ++col) {
            gather_box(cube, row, col, config.inner_size, false, inner_box);
            gather_annulus(cube, row, col, config.inner_size, config.outer_size, annulus);
            SampleSet inner{std::move(inner_box)};
            SampleSet outer{std::move(annulus)};
            Spectrum m_outer = mean_vector(outer);
            Eigen::VectorXd m_diff = mean_vector(inner) - m_outer;
            double score = 0.0;
            if (m_diff.cwiseAbs().maxCoeff() > 0.0) {
                try {
                    CovarianceMatrix inv = regularized_inverse(covariance(outer, m_outer), ridge);
                    score = std::abs(m_diff.dot(inv.entries * m_diff));
                } catch (const Error& e) {
                    rethrow_at_pixel(e, row, col);
                }
            }
            map.scores[static_cast<std::size_t>(row) * map.samples + col] = score;
            inner_box = std::move(inner.vectors);
            annulus = std::move(outer.vectors);
        }
    });

    map.seconds = elapsed_seconds(start);
    return map;
}

ScoreMap dwest(const HyperCube& cube, const WindowConfig& config, const DwestConfig& dcfg,
               int workers) {
    require_mode(config, WindowConfig::Mode::Dual, "dwest");
    if (!(dcfg.eigen_fraction > 0.0 && dcfg.eigen_fraction <= 1.0))
        throw Error(errc::invalid_value, "eigen fraction must be in (0, 1]");
    const auto start = Clock::now();
    ScoreMap map = make_map(cube, Algorithm::DWEST, config);
    map.eigen_fraction = dcfg.eigen_fraction;
    map.workers = workers;

    detail::parallel_rows(cube.lines(), workers, [&](int row) {
        Eigen::MatrixXd inner_box, annulus;
        for (int col = 0; col < cube.samples(); ++col) {
            gather_box(cube, row, col, config.inner_size, false, inner_box);
            gather_annulus(cube, row, col, config.inner_size, config.outer_size, annulus);
            SampleSet inner{std::move(inner_box)};
            SampleSet outer{std::move(annulus)};
            double score = 0.0;
            try {
                Spectrum m_inner = mean_vector(inner);
                Spectrum m_outer = mean_vector(outer);
                Eigen::VectorXd m_diff = m_inner - m_outer;
                Eigen::MatrixXd c_diff =
                    covariance(inner, m_inner).entries - covariance(outer, m_outer).entries;
                EigenDecomposition eig = symmetric_eigen(c_diff);
                const double lambda_max = eig.values.size() > 0 ? eig.values[0] : 0.0;
                if (lambda_max > 0.0) {
                    double projected = 0.0;
                    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
                        if (eig.values[i] <= 0.0 || eig.values[i] < dcfg.eigen_fraction * lambda_max)
                            break; // values are sorted descending
                        projected += eig.vectors.col(i).dot(m_diff);
                    }
                    score = std::abs(projected);
                }
            } catch (const Error& e) {
                rethrow_at_pixel(e, row, col);
            }
            map.scores[static_cast<std::size_t>(row) * map.samples + col] = score;
            inner_box = std::move(inner.vectors);
            annulus = std::move(outer.vectors);
        }
    });

    map.seconds = elapsed_seconds(start);
    return map;
}

ScoreMap detect(const HyperCube& cube, Algorithm algo, const WindowConfig& config,
                const DetectOptions& options) {
    switch (algo) {
    case Algorithm::LRX:
        return local_rx(cube, config, options.ridge, options.workers);
    case Algorithm::DWRX:
        return dwrx(cube, config, options.ridge, options.workers);
    case Algorithm::DWEST:
        return dwest(cube, config, options.dwest, options.workers);
    }
    throw Error(errc::invalid_value, "unknown algorithm");
}

void save_score_map(const ScoreMap& map, const std::filesystem::path& prefix) {
    CubeHeader h;
    h.lines = map.lines;
    h.samples = map.samples;
    h.bands = 1;
    h.data_type_code = 4;
    h.byte_order = 0;
    h.interleave = Interleave::BSQ;

    std::filesystem::path hdr = prefix;
    hdr.replace_extension(".hdr");
    std::ofstream out_hdr(hdr, std::ios::trunc);
    if (!out_hdr) throw Error(errc::io_failure, "cannot open " + hdr.string() + " for writing");
    out_hdr << write_envi_header(h);

    std::filesystem::path rawp = prefix;
    rawp.replace_extension(".raw");
    std::ofstream out(rawp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io_failure, "cannot open " + rawp.string() + " for writing");
    for (double s : map.scores) {
        float f = static_cast<float>(s);
        std::uint8_t b[4];
        std::memcpy(b, &f, 4);
        if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + 4);
        out.write(reinterpret_cast<const char*>(b), 4);
    }
    if (!out) throw Error(errc::io_failure, "short write to " + rawp.string());
}

ScoreMap load_score_map(const std::filesystem::path& path) {
    std::filesystem::path prefix = path;
    if (prefix.extension() == ".hdr" || prefix.extension() == ".raw")
        prefix.replace_extension();
    HyperCube cube = load_cube(prefix);
    if (cube.bands() != 1)
        throw Error(errc::invalid_value, "score map must have exactly 1 band");
    ScoreMap map;
    map.lines = cube.lines();
    map.samples = cube.samples();
    map.scores = std::move(cube.values);
    return map;
}

} // namespace hsad
