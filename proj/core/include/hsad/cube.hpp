#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hsad/error.hpp"

namespace hsad {

/// A pixel spectrum: one reflectance value per band.
using Spectrum = Eigen::VectorXd;

enum class Interleave { BSQ, BIL, BIP };

const char* interleave_name(Interleave il) noexcept;

/// ENVI-style raster header. Only the subset needed to locate samples in a
/// headerless raw file is kept; everything else in a header is ignored.
struct CubeHeader {
    int samples = 0;          ///< columns
    int lines = 0;            ///< rows
    int bands = 0;            ///< spectral bands L
    Interleave interleave = Interleave::BSQ;
    int data_type_code = 5;   ///< 1=u8, 2=i16, 4=f32, 5=f64, 12=u16
    int byte_order = 0;       ///< 0 little-endian, 1 big-endian

    std::size_t element_size() const;
    std::size_t expected_bytes() const;
    void validate() const;   ///< throws InvalidValue on any bad field
};

/// In-memory hyperspectral cube. Values are 64-bit floats laid out
/// (row, col, band) with band fastest, regardless of the source interleave.
/// Immutable by convention once loaded; detectors only read it.
struct HyperCube {
    CubeHeader header;
    std::vector<double> values;

    HyperCube() = default;
    HyperCube(int lines, int samples, int bands);

    int lines() const { return header.lines; }
    int samples() const { return header.samples; }
    int bands() const { return header.bands; }

    double& at(int row, int col, int band) {
        return values[(static_cast<std::size_t>(row) * header.samples + col) * header.bands + band];
    }
    double at(int row, int col, int band) const {
        return values[(static_cast<std::size_t>(row) * header.samples + col) * header.bands + band];
    }
    /// Contiguous view of one pixel's band values (no bounds check).
    std::span<const double> pixel(int row, int col) const {
        return {values.data() + (static_cast<std::size_t>(row) * header.samples + col) * header.bands,
                static_cast<std::size_t>(header.bands)};
    }
};

/// Parse an ENVI-style `key = value` header. Keys are case-insensitive and
/// whitespace-tolerant; `{...}` values (possibly multi-line) are skipped;
/// unknown keys are ignored. `byte order` defaults to 0.
CubeHeader parse_envi_header(std::string_view text);

/// Render a header suitable for parse_envi_header.
std::string write_envi_header(const CubeHeader& header);

/// Decode a raw cube per the header. All element types are widened to
/// 64-bit float; non-finite input is an error.
HyperCube read_cube(const CubeHeader& header, std::span<const std::uint8_t> raw);

struct EncodedCube {
    std::string header_text;
    std::vector<std::uint8_t> raw;
};

/// Encode as 64-bit float (data type 5, little-endian) in the requested
/// interleave. read_cube(parse_envi_header(h), raw) round-trips bit-exactly.
EncodedCube write_cube(const HyperCube& cube, Interleave interleave);

/// Bounds-checked spectrum extraction.
Spectrum get_pixel_spectrum(const HyperCube& cube, int row, int col);

/// File helpers: `path` may be the .hdr path or the common prefix of the
/// .hdr/.raw pair.
HyperCube load_cube(const std::filesystem::path& path);
void save_cube(const HyperCube& cube, const std::filesystem::path& prefix,
               Interleave interleave = Interleave::BSQ);

} // namespace hsad
