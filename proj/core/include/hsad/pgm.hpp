#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hsad {

struct PgmImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; ///< row-major
};

/// Binary PGM, exactly "P5\n<w> <h>\n255\n" followed by w*h bytes.
std::vector<std::uint8_t> encode_pgm(const PgmImage& image);
PgmImage decode_pgm(std::span<const std::uint8_t> bytes);

PgmImage load_pgm(const std::filesystem::path& path);
void save_pgm(const PgmImage& image, const std::filesystem::path& path);

} // namespace hsad
