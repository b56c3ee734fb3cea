#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hsad/cube.hpp"
#include "hsad/stats.hpp"

namespace hsad {

enum class Algorithm { LRX, DWRX, DWEST };

const char* algorithm_name(Algorithm algo) noexcept;
Algorithm algorithm_from_name(const std::string& name);

/// Sliding-window geometry. Single mode is one square window (LRX); Dual
/// mode is a concentric inner box and outer annulus (DWRX, DWEST).
struct WindowConfig {
    enum class Mode { Single, Dual };

    Mode mode = Mode::Single;
    int single_size = 15;
    int inner_size = 5;
    int outer_size = 13;

    static WindowConfig single(int size);
    static WindowConfig dual(int inner, int outer);

    void validate() const;
    std::string describe() const; ///< "15" or "5/13"
};

struct DwestConfig {
    /// Keep eigenvectors whose positive eigenvalue is at least this fraction
    /// of the largest positive eigenvalue.
    double eigen_fraction = 0.1;
};

struct DetectOptions {
    double ridge = 1e-6;
    DwestConfig dwest;
    int workers = 1;
};

/// Per-pixel detector output plus the run metadata needed to reproduce and
/// benchmark it.
struct ScoreMap {
    int lines = 0;
    int samples = 0;
    std::vector<double> scores; ///< row-major, all finite and >= 0

    std::string algorithm;
    std::string window;
    double ridge = 0.0;
    double eigen_fraction = 0.0;
    double seconds = 0.0;
    int workers = 1;

    double at(int row, int col) const {
        return scores[static_cast<std::size_t>(row) * samples + col];
    }
};

/// Reflection index for spatial mirror extension at image borders
/// (whole-sample reflection: -1 -> 1, n -> n-2; any overshoot folds).
int mirror_index(int i, int n) noexcept;

/// Inner box and outer annulus pixels around (row, col), border-mirrored.
/// Counts are inner^2 and outer^2 - inner^2.
std::pair<SampleSet, SampleSet> dual_window_samples(const HyperCube& cube, int row, int col,
                                                    const WindowConfig& config);

/// Mahalanobis distance of each pixel from the statistics of its
/// surrounding window (center excluded).
ScoreMap local_rx(const HyperCube& cube, const WindowConfig& config, double ridge,
                  int workers = 1);

/// Quadratic form of the inner-minus-outer mean difference under the
/// inverse outer-annulus covariance.
ScoreMap dwrx(const HyperCube& cube, const WindowConfig& config, double ridge, int workers = 1);

/// Projects the inner-minus-outer mean difference onto the dominant
/// positive-eigenvalue eigenvectors of C_inner - C_outer.
ScoreMap dwest(const HyperCube& cube, const WindowConfig& config, const DwestConfig& dcfg,
               int workers = 1);

/// Dispatch by algorithm; throws ConfigMismatch when the window mode does
/// not fit, and stamps wall-clock duration into the result.
ScoreMap detect(const HyperCube& cube, Algorithm algo, const WindowConfig& config,
                const DetectOptions& options = {});

/// Score maps serialize as raw little-endian float32, row-major, with an
/// ENVI-style sidecar header (bands = 1, data type = 4).
void save_score_map(const ScoreMap& map, const std::filesystem::path& prefix);
ScoreMap load_score_map(const std::filesystem::path& path);

} // namespace hsad
