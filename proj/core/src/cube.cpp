#include "hsad/cube.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hsad {

const char* interleave_name(Interleave il) noexcept {
    switch (il) {
    case Interleave::BSQ: return "bsq";
    case Interleave::BIL: return "bil";
    case Interleave::BIP: return "bip";
    }
    return "?";
}

std::size_t CubeHeader::element_size() const {
    switch (data_type_code) {
    case 1: return 1;
    case 2: return 2;
    case 4: return 4;
    case 5: return 8;
    case 12: return 2;
    default:
        throw Error(errc::invalid_value,
                    "unsupported data type code " + std::to_string(data_type_code));
    }
}

std::size_t CubeHeader::expected_bytes() const {
    return static_cast<std::size_t>(samples) * lines * bands * element_size();
}

void CubeHeader::validate() const {
    if (samples < 1 || lines < 1 || bands < 1)
        throw Error(errc::invalid_value, "samples, lines and bands must all be >= 1");
    element_size(); // throws on bad code
    if (byte_order != 0 && byte_order != 1)
        throw Error(errc::invalid_value, "byte order must be 0 or 1");
}

HyperCube::HyperCube(int lines, int samples, int bands) {
    header.lines = lines;
    header.samples = samples;
    header.bands = bands;
    header.data_type_code = 5;
    header.validate();
    values.assign(static_cast<std::size_t>(lines) * samples * bands, 0.0);
}

namespace {

std::string normalize_key(std::string_view raw) {
    std::string key;
    bool pending_space = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !key.empty();
            continue;
        }
        if (pending_space) {
            key.push_back(' ');
            pending_space = false;
        }
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return key;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

int parse_count(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size())
            throw Error(errc::invalid_value, key + " is not an integer: '" + value + "'");
        return static_cast<int>(v);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(errc::invalid_value, key + " is not an integer: '" + value + "'");
    }
}

template <typename T>
double widen(const std::uint8_t* p, bool swap) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    if (swap && sizeof(T) > 1) {
        std::uint8_t b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        std::reverse(b, b + sizeof(T));
        std::memcpy(&v, b, sizeof(T));
    }
    return static_cast<double>(v);
}

} // namespace

CubeHeader parse_envi_header(std::string_view text) {
    CubeHeader h;
    bool have_samples = false, have_lines = false, have_bands = false;
    bool have_interleave = false, have_dtype = false;

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        std::size_t eol = text.find('\n', i);
        if (eol == std::string_view::npos) eol = n;
        std::string_view line = text.substr(i, eol - i);
        i = eol + 1;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            continue; // "ENVI" magic, blank lines, other junk

        std::string key = normalize_key(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        // Multi-line `{ ... }` values: consume until braces balance, then
        // flatten. Used only by keys we ignore (wavelength lists etc.).
        if (!value.empty() && value.front() == '{') {
            long depth = std::count(value.begin(), value.end(), '{') -
                         std::count(value.begin(), value.end(), '}');
            while (depth > 0 && i < n) {
                std::size_t e2 = text.find('\n', i);
                if (e2 == std::string_view::npos) e2 = n;
                std::string_view cont = text.substr(i, e2 - i);
                depth += std::count(cont.begin(), cont.end(), '{');
                depth -= std::count(cont.begin(), cont.end(), '}');
                value += ' ';
                value += trim(cont);
                i = e2 + 1;
            }
            continue; // brace values are never scalars we need
        }

        if (key == "samples") {
            h.samples = parse_count(key, value);
            have_samples = true;
        } else if (key == "lines") {
            h.lines = parse_count(key, value);
            have_lines = true;
        } else if (key == "bands") {
            h.bands = parse_count(key, value);
            have_bands = true;
        } else if (key == "data type") {
            h.data_type_code = parse_count(key, value);
            have_dtype = true;
        } else if (key == "byte order") {
            h.byte_order = parse_count(key, value);
        } else if (key == "interleave") {
            std::string v;
            for (char c : value) v.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            if (v == "bsq") h.interleave = Interleave::BSQ;
            else if (v == "bil") h.interleave = Interleave::BIL;
            else if (v == "bip") h.interleave = Interleave::BIP;
            else throw Error(errc::invalid_value, "unsupported interleave '" + value + "'");
            have_interleave = true;
        }
        // anything else: ignored
    }

    if (!have_samples) throw Error(errc::missing_key, "samples");
    if (!have_lines) throw Error(errc::missing_key, "lines");
    if (!have_bands) throw Error(errc::missing_key, "bands");
    if (!have_interleave) throw Error(errc::missing_key, "interleave");
    if (!have_dtype) throw Error(errc::missing_key, "data type");
    h.validate();
    return h;
}

std::string write_envi_header(const CubeHeader& header) {
    std::ostringstream os;
    os << "ENVI\n"
       << "samples = " << header.samples << "\n"
       << "lines = " << header.lines << "\n"
       << "bands = " << header.bands << "\n"
       << "header offset = 0\n"
       << "file type = ENVI Standard\n"
       << "data type = " << header.data_type_code << "\n"
       << "interleave = " << interleave_name(header.interleave) << "\n"
       << "byte order = " << header.byte_order << "\n";
    return os.str();
}

HyperCube read_cube(const CubeHeader& header, std::span<const std::uint8_t> raw) {
    header.validate();
    if (raw.size() != header.expected_bytes())
        throw Error(errc::size_mismatch,
                    "raw data is " + std::to_string(raw.size()) + " bytes, header expects " +
                        std::to_string(header.expected_bytes()));

    const bool swap = (header.byte_order == 1) != (std::endian::native == std::endian::big);
    const std::size_t esize = header.element_size();
    const int lines = header.lines, samples = header.samples, bands = header.bands;

    HyperCube cube(lines, samples, bands);
    cube.header = header;
    cube.header.data_type_code = 5; // in-memory representation
    cube.header.byte_order = 0;

    auto decode = [&](std::size_t src_index) -> double {
        const std::uint8_t* p = raw.data() + src_index * esize;
        switch (header.data_type_code) {
        case 1: return widen<std::uint8_t>(p, swap);
        case 2: return widen<std::int16_t>(p, swap);
        case 4: return widen<float>(p, swap);
        case 5: return widen<double>(p, swap);
        case 12: return widen<std::uint16_t>(p, swap);
        }
        return 0.0; // unreachable; validate() rejected other codes
    };

    const std::size_t plane = static_cast<std::size_t>(lines) * samples;
    for (int row = 0; row < lines; ++row) {
        for (int col = 0; col < samples; ++col) {
            for (int band = 0; band < bands; ++band) {
                std::size_t src;
                switch (header.interleave) {
                case Interleave::BSQ:
                    src = band * plane + static_cast<std::size_t>(row) * samples + col;
                    break;
                case Interleave::BIL:
                    src = (static_cast<std::size_t>(row) * bands + band) * samples + col;
                    break;
                case Interleave::BIP:
                default:
                    src = (static_cast<std::size_t>(row) * samples + col) * bands + band;
                    break;
                }
                double v = decode(src);
                if (!std::isfinite(v))
                    throw Error(errc::non_finite_value,
                                "at (row=" + std::to_string(row) + ", col=" + std::to_string(col) +
                                    ", band=" + std::to_string(band) + ")");
                cube.at(row, col, band) = v;
            }
        }
    }
    return cube;
}

EncodedCube write_cube(const HyperCube& cube, Interleave interleave) {
    CubeHeader h = cube.header;
    h.interleave = interleave;
    h.data_type_code = 5;
    h.byte_order = 0;
    h.validate();
    if (cube.values.size() != static_cast<std::size_t>(h.lines) * h.samples * h.bands)
        throw Error(errc::size_mismatch, "cube value count does not match its header");

    EncodedCube out;
    out.header_text = write_envi_header(h);
    out.raw.resize(h.expected_bytes());

    const int lines = h.lines, samples = h.samples, bands = h.bands;
    const std::size_t plane = static_cast<std::size_t>(lines) * samples;
    const bool swap = std::endian::native == std::endian::big; // emit little-endian
    for (int row = 0; row < lines; ++row) {
        for (int col = 0; col < samples; ++col) {
            for (int band = 0; band < bands; ++band) {
                std::size_t dst;
                switch (interleave) {
                case Interleave::BSQ:
                    dst = band * plane + static_cast<std::size_t>(row) * samples + col;
                    break;
                case Interleave::BIL:
                    dst = (static_cast<std::size_t>(row) * bands + band) * samples + col;
                    break;
                case Interleave::BIP:
                default:
                    dst = (static_cast<std::size_t>(row) * samples + col) * bands + band;
                    break;
                }
                double v = cube.at(row, col, band);
                std::uint8_t b[sizeof(double)];
                std::memcpy(b, &v, sizeof(double));
                if (swap) std::reverse(b, b + sizeof(double));
                std::memcpy(out.raw.data() + dst * sizeof(double), b, sizeof(double));
            }
        }
    }
    return out;
}

Spectrum get_pixel_spectrum(const HyperCube& cube, int row, int col) {
    if (row < 0 || row >= cube.lines() || col < 0 || col >= cube.samples())
        throw Error(errc::out_of_bounds,
                    "pixel (" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                        std::to_string(cube.lines()) + "x" + std::to_string(cube.samples()));
    auto view = cube.pixel(row, col);
    return Eigen::Map<const Eigen::VectorXd>(view.data(), static_cast<Eigen::Index>(view.size()));
}

namespace {

std::filesystem::path with_ext(std::filesystem::path p, const char* ext) {
    p.replace_extension(ext);
    return p;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io_failure, "cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::filesystem::path& path, const void* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io_failure, "cannot open " + path.string() + " for writing");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw Error(errc::io_failure, "short write to " + path.string());
}

} // namespace

HyperCube load_cube(const std::filesystem::path& path) {
    std::filesystem::path hdr = path;
    if (hdr.extension() != ".hdr") hdr = with_ext(hdr, ".hdr");
    auto header_bytes = read_file(hdr);
    CubeHeader header = parse_envi_header(
        std::string_view(reinterpret_cast<const char*>(header_bytes.data()), header_bytes.size()));
    auto raw = read_file(with_ext(hdr, ".raw"));
    return read_cube(header, raw);
}

void save_cube(const HyperCube& cube, const std::filesystem::path& prefix, Interleave interleave) {
    EncodedCube enc = write_cube(cube, interleave);
    write_file(with_ext(prefix, ".hdr"), enc.header_text.data(), enc.header_text.size());
    write_file(with_ext(prefix, ".raw"), enc.raw.data(), enc.raw.size());
}

} // namespace hsad
