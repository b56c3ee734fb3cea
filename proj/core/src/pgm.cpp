#include "hsad/pgm.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include "hsad/error.hpp"

namespace hsad {

std::vector<std::uint8_t> encode_pgm(const PgmImage& image) {
    if (image.width < 1 || image.height < 1)
        throw Error(errc::invalid_value, "PGM dimensions must be positive");
    if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
        throw Error(errc::size_mismatch, "PGM pixel count does not match dimensions");
    std::string header =
        "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

namespace {

// Reads the next whitespace-delimited token, skipping '#' comments.
std::string next_token(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (std::isspace(bytes[pos])) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    std::string token;
    while (pos < bytes.size() && !std::isspace(bytes[pos]))
        token.push_back(static_cast<char>(bytes[pos++]));
    return token;
}

int token_int(std::span<const std::uint8_t> bytes, std::size_t& pos, const char* what) {
    std::string tok = next_token(bytes, pos);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw Error(errc::invalid_value, std::string("bad PGM ") + what + ": '" + tok + "'");
    }
}

} // namespace

PgmImage decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    if (next_token(bytes, pos) != "P5")
        throw Error(errc::invalid_value, "not a binary PGM (missing P5 magic)");
    PgmImage image;
    image.width = token_int(bytes, pos, "width");
    image.height = token_int(bytes, pos, "height");
    const int maxval = token_int(bytes, pos, "maxval");
    if (image.width < 1 || image.height < 1 || maxval != 255)
        throw Error(errc::invalid_value, "unsupported PGM geometry or maxval");
    ++pos; // exactly one whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(image.width) * image.height;
    if (bytes.size() - pos < need)
        throw Error(errc::size_mismatch, "PGM data truncated");
    image.pixels.assign(bytes.begin() + pos, bytes.begin() + pos + need);
    return image;
}

PgmImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io_failure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_pgm(bytes);
}

void save_pgm(const PgmImage& image, const std::filesystem::path& path) {
    auto bytes = encode_pgm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io_failure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(errc::io_failure, "short write to " + path.string());
}

} // namespace hsad
