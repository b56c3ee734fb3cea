#include "hsad/wavelet.hpp"

#include <bit>
#include <cmath>

#include "parallel.hpp"

namespace hsad {

namespace {

// Daubechies scaling taps, orders 1..10, minimal-phase factorization,
// normalized so the taps sum to sqrt(2). Values are the standard published
// constants (Daubechies' orthonormal construction) rounded to double; the
// admissibility test suite checks every invariant to 1e-12.
const std::vector<double> kDaubechiesLow[10] = {
    {0.70710678118654752, 0.70710678118654752},
    {0.48296291314453414, 0.83651630373780791, 0.22414386804201338, -0.12940952255126038},
    {0.33267055295008262, 0.80689150931109258, 0.45987750211849157, -0.13501102001025459,
     -0.085441273882026662, 0.035226291885709537},
    {0.23037781330889650, 0.71484657055291565, 0.63088076792985891, -0.027983769416859854,
     -0.18703481171909308, 0.030841381835560764, 0.032883011666885200, -0.010597401785069032},
    {0.16010239797419291, 0.60382926979718967, 0.72430852843777293, 0.13842814590132073,
     -0.24229488706638203, -0.032244869584638375, 0.077571493840045714, -0.0062414902127982743,
     -0.012580751999081999, 0.0033357252854737713},
    {0.11154074335010946, 0.49462389039845309, 0.75113390802109535, 0.31525035170919763,
     -0.22626469396543982, -0.12976686756726194, 0.097501605587323049, 0.027522865530305729,
     -0.031582039317486030, 0.00055384220116149614, 0.0047772575109455106, -0.0010773010853084796},
    {0.077852054085009179, 0.39653931948191731, 0.72913209084623512, 0.46978228740519312,
     -0.14390600392856498, -0.22403618499387498, 0.071309219266830265, 0.080612609151083072,
     -0.038029936935014414, -0.016574541630666881, 0.012550998556099841, 0.00042957797292136652,
     -0.0018016407040474909, 0.00035371379997452025},
    {0.054415842243104010, 0.31287159091429997, 0.67563073629728981, 0.58535468365420671,
     -0.015829105256349306, -0.28401554296154693, 0.00047248457391328277, 0.12874742662047846,
     -0.017369301001807546, -0.044088253930794752, 0.013981027917398282, 0.0087460940474057767,
     -0.0048703529934515743, -0.00039174037337694705, 0.00067544940645056937,
     -0.00011747678412476953},
    {0.038077947363878347, 0.24383467461259035, 0.60482312369011111, 0.65728807805130054,
     0.13319738582500758, -0.29327378327917491, -0.096840783222976461, 0.14854074933810638,
     0.030725681479333379, -0.067632829061329974, 0.00025094711483145196, 0.022361662123679097,
     -0.0047232047577513973, -0.0042815036824634298, 0.0018476468830562265, 0.00023038576352319597,
     -0.00025196318894271014, 0.000039347320316271599},
    {0.026670057900555554, 0.18817680007769149, 0.52720118893172559, 0.68845903945360357,
     0.28117234366057746, -0.24984642432731538, -0.19594627437737704, 0.12736934033579326,
     0.093057364603572351, -0.071394147166397087, -0.029457536821875813, 0.033212674059341002,
     0.0036065535669561697, -0.010733175483330575, 0.0013953517470529012, 0.0019924052951850561,
     -0.00068585669495971163, -0.00011646685512928545, 0.000093588670320069591,
     -0.000013264202894521245},
};

int checked_pow2(int value, errc code, const char* what) {
    if (value < 2 || !std::has_single_bit(static_cast<unsigned>(value)))
        throw Error(code, std::string(what) + " must be a power of two >= 2, got " +
                              std::to_string(value));
    return value;
}

} // namespace

WaveletFilterPair daubechies_filters(int order) {
    if (order < 1 || order > 10)
        throw Error(errc::unsupported_order,
                    "Daubechies order must be in 1..10, got " + std::to_string(order));
    WaveletFilterPair f;
    f.order = order;
    f.low = kDaubechiesLow[order - 1];
    const std::size_t len = f.low.size();
    f.high.resize(len);
    for (std::size_t n = 0; n < len; ++n) {
        double v = f.low[len - 1 - n];
        f.high[n] = (n % 2 == 0) ? v : -v;
    }
    return f;
}

DwtBands dwt_level(std::span<const double> signal, const WaveletFilterPair& filters) {
    const std::size_t n = signal.size();
    const std::size_t taps = filters.length();
    if (n % 2 != 0)
        throw Error(errc::odd_length, "signal length " + std::to_string(n) + " is odd");
    if (n < taps)
        throw Error(errc::too_short, "signal length " + std::to_string(n) +
                                         " shorter than filter length " + std::to_string(taps));

    DwtBands out;
    out.approx.resize(n / 2);
    out.detail.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double a = 0.0, d = 0.0;
        std::size_t base = 2 * k;
        for (std::size_t j = 0; j < taps; ++j) {
            std::size_t idx = base + j;
            if (idx >= n) idx -= n; // taps <= n, so one wrap suffices
            a += filters.low[j] * signal[idx];
            d += filters.high[j] * signal[idx];
        }
        out.approx[k] = a;
        out.detail[k] = d;
    }
    return out;
}

std::vector<double> idwt_level(std::span<const double> approx, std::span<const double> detail,
                               const WaveletFilterPair& filters) {
    if (approx.size() != detail.size())
        throw Error(errc::length_mismatch,
                    "approx length " + std::to_string(approx.size()) + " vs detail length " +
                        std::to_string(detail.size()));
    const std::size_t n = approx.size() * 2;
    const std::size_t taps = filters.length();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < approx.size(); ++k) {
        std::size_t base = 2 * k;
        for (std::size_t j = 0; j < taps; ++j) {
            std::size_t idx = (base + j) % n;
            out[idx] += approx[k] * filters.low[j] + detail[k] * filters.high[j];
        }
    }
    return out;
}

std::vector<double> multilevel_approx(std::span<const double> signal,
                                      const WaveletFilterPair& filters, int target_len) {
    checked_pow2(target_len, errc::invalid_value, "target length");
    if (signal.empty())
        throw Error(errc::too_short, "empty signal");

    std::size_t padded = std::bit_ceil(signal.size());
    if (static_cast<std::size_t>(target_len) > padded)
        throw Error(errc::target_too_large,
                    "target length " + std::to_string(target_len) + " exceeds padded length " +
                        std::to_string(padded));

    // Half-sample mirror: x[n], x[n-1], ... appended until the next power of
    // two. The pad never needs more than n-1 samples since bit_ceil(n) < 2n.
    std::vector<double> current(signal.begin(), signal.end());
    current.reserve(padded);
    for (std::size_t k = 0; current.size() < padded; ++k)
        current.push_back(signal[signal.size() - 1 - k]);

    while (current.size() > static_cast<std::size_t>(target_len)) {
        DwtBands bands = dwt_level(current, filters);
        current = std::move(bands.approx);
    }
    return current;
}

HyperCube reduce_cube(const HyperCube& cube, const WaveletFilterPair& filters, int target_bands,
                      int workers) {
    checked_pow2(target_bands, errc::invalid_value, "target bands");

    // Fail fast on contract violations instead of inside a worker.
    {
        auto probe = cube.pixel(0, 0);
        (void)multilevel_approx(probe, filters, target_bands);
    }

    HyperCube out(cube.lines(), cube.samples(), target_bands);
    detail::parallel_rows(cube.lines(), workers, [&](int row) {
        for (int col = 0; col < cube.samples(); ++col) {
            std::vector<double> approx = multilevel_approx(cube.pixel(row, col), filters, target_bands);
            for (int band = 0; band < target_bands; ++band)
                out.at(row, col, band) = approx[band];
        }
    });
    return out;
}

} // namespace hsad
