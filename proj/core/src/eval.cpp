#include "hsad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace hsad {

RocCurve roc_curve(const ScoreMap& scores, const GroundTruthMask& truth) {
    if (scores.lines != truth.lines || scores.samples != truth.samples)
        throw Error(errc::dimension_mismatch,
                    "score map is " + std::to_string(scores.lines) + "x" +
                        std::to_string(scores.samples) + ", truth is " +
                        std::to_string(truth.lines) + "x" + std::to_string(truth.samples));

    const std::size_t total = scores.scores.size();
    std::uint64_t positives = truth.positive_count();
    std::uint64_t negatives = total - positives;
    if (positives == 0 || negatives == 0)
        throw Error(errc::degenerate_truth, "truth mask must contain both classes");

    // sort pixel indices by score descending; equal scores form one step
    std::vector<std::uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores.scores[a] > scores.scores[b];
    });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0}); // threshold above every score
    std::uint64_t tp = 0, fp = 0;
    // AUC as an exact integer: sum of fp_step * (tp_before + tp_after),
    // which equals 2*(pairs won) + (pairs tied); divide once at the end.
    std::uint64_t auc_twice_num = 0;

    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i;
        std::uint64_t tp_step = 0, fp_step = 0;
        const double value = scores.scores[order[i]];
        while (j < total && scores.scores[order[j]] == value) {
            if (truth.mask[order[j]]) ++tp_step; else ++fp_step;
            ++j;
        }
        auc_twice_num += fp_step * (2 * tp + tp_step);
        tp += tp_step;
        fp += fp_step;
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                                static_cast<double>(tp) / static_cast<double>(positives)});
        i = j;
    }

    curve.auc = static_cast<double>(auc_twice_num) /
                (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
    return curve;
}

double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.far - a.far) * (a.td + b.td) / 2.0;
    }
    return area;
}

ThresholdResult adaptive_threshold(const ScoreMap& scores, double z_alpha) {
    if (scores.scores.empty())
        throw Error(errc::invalid_value, "cannot threshold an empty score map");

    const double n = static_cast<double>(scores.scores.size());
    double mean = 0.0;
    for (double s : scores.scores) mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : scores.scores) var += (s - mean) * (s - mean);
    var /= n; // population variance

    ThresholdResult result;
    result.z_alpha = z_alpha;
    result.tau = mean + z_alpha * std::sqrt(var);
    result.mask.lines = scores.lines;
    result.mask.samples = scores.samples;
    result.mask.mask.resize(scores.scores.size());
    for (std::size_t i = 0; i < scores.scores.size(); ++i)
        result.mask.mask[i] = scores.scores[i] > result.tau ? 1 : 0;
    return result;
}

std::vector<std::uint8_t> render_pgm(const ScoreMap& scores) {
    PgmImage image;
    image.width = scores.samples;
    image.height = scores.lines;
    image.pixels.resize(scores.scores.size());

    const auto [lo_it, hi_it] = std::minmax_element(scores.scores.begin(), scores.scores.end());
    const double lo = scores.scores.empty() ? 0.0 : *lo_it;
    const double hi = scores.scores.empty() ? 0.0 : *hi_it;
    if (hi > lo) {
        const double scale = 255.0 / (hi - lo);
        for (std::size_t i = 0; i < scores.scores.size(); ++i)
            image.pixels[i] =
                static_cast<std::uint8_t>(std::lround((scores.scores[i] - lo) * scale));
    } // constant map: all zero

    return encode_pgm(image);
}

std::string roc_to_csv(const RocCurve& curve) {
    std::string out = "far,td\n";
    char buf[96];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.far, p.td);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "# auc=%.17g\n", curve.auc);
    out += buf;
    return out;
}

} // namespace hsad
