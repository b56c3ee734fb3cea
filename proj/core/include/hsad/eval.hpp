#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsad/detect.hpp"
#include "hsad/synth.hpp"

namespace hsad {

struct RocPoint {
    double far = 0.0; ///< false-alarm rate
    double td = 0.0;  ///< true-detection rate
};

/// Exact ROC curve: one step per distinct score value, ties collapsed into
/// a single step. auc is the trapezoidal area, computed from integer pair
/// counts so it matches the brute-force pairwise statistic bit for bit.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

RocCurve roc_curve(const ScoreMap& scores, const GroundTruthMask& truth);

/// Trapezoidal area under an arbitrary curve's points.
double auc(const RocCurve& curve);

/// tau = mean + z_alpha * stddev over all score pixels (population stddev);
/// the mask declares pixels with score strictly above tau.
struct ThresholdResult {
    double tau = 0.0;
    GroundTruthMask mask;
    double z_alpha = 0.0;
};

ThresholdResult adaptive_threshold(const ScoreMap& scores, double z_alpha);

/// 8-bit rendering with min-max stretch to 0..255, rounding half away from
/// zero; a constant map renders all-zero. Returns complete PGM file bytes.
std::vector<std::uint8_t> render_pgm(const ScoreMap& scores);

/// CSV with header "far,td", 17-significant-digit floats, and a trailing
/// "# auc=<value>" comment line.
std::string roc_to_csv(const RocCurve& curve);

} // namespace hsad
