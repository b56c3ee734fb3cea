#pragma once

#include <span>
#include <vector>

#include "hsad/cube.hpp"

namespace hsad {

/// Orthonormal half-band analysis filter pair.
///
/// `low` holds the scaling taps h[n] (sum = sqrt(2), unit energy), `high`
/// the wavelet taps g[n] = (-1)^n * h[len-1-n]. Both have length 2*order.
struct WaveletFilterPair {
    std::vector<double> low;
    std::vector<double> high;
    int order = 0;

    std::size_t length() const { return low.size(); }
};

/// Daubechies filters with `order` vanishing moments, 1..10. Order 1 is
/// Haar; order 2 is the 4-tap filter.
WaveletFilterPair daubechies_filters(int order);

struct DwtBands {
    std::vector<double> approx;
    std::vector<double> detail;
};

/// One analysis stage with periodic (circular) extension.
///
/// Alignment convention, used by every routine here:
///   approx[k] = sum_j low[j]  * x[(2k + j) mod n]
///   detail[k] = sum_j high[j] * x[(2k + j) mod n]
/// The synthesis in idwt_level is the adjoint of this map, which inverts it
/// exactly because the periodized filter bank is orthonormal.
DwtBands dwt_level(std::span<const double> signal, const WaveletFilterPair& filters);

/// Inverse of dwt_level; output length is approx.size() + detail.size().
std::vector<double> idwt_level(std::span<const double> approx, std::span<const double> detail,
                               const WaveletFilterPair& filters);

/// Iterated approximation branch of the decomposition tree.
///
/// The signal is symmetric-padded (half-sample mirror: ..., x[n-2], x[n-1] |
/// x[n-1], x[n-2], ...) up to the next power of two P >= n, then the low-pass
/// branch is followed log2(P) - log2(target_len) times. target_len must be a
/// power of two >= 2.
std::vector<double> multilevel_approx(std::span<const double> signal,
                                      const WaveletFilterPair& filters, int target_len);

/// Replace each pixel's spectrum with its multilevel approximation
/// coefficients; output cube is lines x samples x target_bands.
HyperCube reduce_cube(const HyperCube& cube, const WaveletFilterPair& filters, int target_bands,
                      int workers = 1);

} // namespace hsad
