#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "hsad/cube.hpp"
#include "hsad/pgm.hpp"

namespace hsad {

/// Binary truth grid; nonzero marks an anomaly pixel.
struct GroundTruthMask {
    int lines = 0;
    int samples = 0;
    std::vector<std::uint8_t> mask; ///< row-major, 0 or 1

    std::uint8_t at(int row, int col) const {
        return mask[static_cast<std::size_t>(row) * samples + col];
    }
    std::size_t positive_count() const;
};

/// One implanted target: a footprint of whole pixels mixed with the target
/// spectrum at fill fraction f, plus a Gaussian-attenuated contamination of
/// the surrounding background out to adjacency_radius pixels.
struct ImplantSpec {
    int row = 0;
    int col = 0;
    std::vector<std::pair<int, int>> footprint = {{0, 0}}; ///< offsets from (row, col)
    Spectrum target_spectrum;
    double fill_fraction = 0.55;
    double adjacency_width = 1.0;
    int adjacency_radius = 1;
};

struct BackgroundModel {
    enum class Kind { GaussianIID, CorrelatedGaussian, FromCube };

    Kind kind = Kind::GaussianIID;
    Spectrum mean;            ///< per-band mean (Gaussian kinds)
    Spectrum stddev;          ///< per-band standard deviation (Gaussian kinds)
    double band_correlation = 0.0; ///< AR(1) coefficient across bands (Correlated)
    HyperCube donor;          ///< FromCube: cropped at (0,0) to the scene size
};

struct SceneConfig {
    int lines = 0;
    int samples = 0;
    int bands = 0;
    std::uint64_t rng_seed = 0;
    BackgroundModel background;
    std::vector<ImplantSpec> implants;
};

/// z = f*t + (1-f)*b, component-wise.
Spectrum implant_subpixel(const Spectrum& background, const Spectrum& target, double f);

/// z = g*f*t + (1 - g*f)*b with g = exp(-rho^2 / w^2). rho = 0 reduces to
/// implant_subpixel.
Spectrum adjacency_blend(const Spectrum& background, const Spectrum& target, double f, double rho,
                         double w);

/// Deterministic scene synthesis: background from the seeded generator,
/// then implants applied in listed order. The mask marks footprint pixels
/// only; adjacency-contaminated neighbours stay background in the truth.
std::pair<HyperCube, GroundTruthMask> generate_scene(const SceneConfig& config);

/// Plain-text scene description (see README for the format).
SceneConfig parse_scene_config(std::string_view text);
SceneConfig load_scene_config(const std::filesystem::path& path);

/// Truth masks serialize as binary PGM, 255 = anomaly.
PgmImage mask_to_pgm(const GroundTruthMask& mask);
GroundTruthMask mask_from_pgm(const PgmImage& image);

} // namespace hsad
