#include "hsad/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "hsad/rng.hpp"

namespace hsad {

std::size_t GroundTruthMask::positive_count() const {
    return static_cast<std::size_t>(
        std::count_if(mask.begin(), mask.end(), [](std::uint8_t v) { return v != 0; }));
}

Spectrum implant_subpixel(const Spectrum& background, const Spectrum& target, double f) {
    if (background.size() != target.size())
        throw Error(errc::length_mismatch, "background and target spectra differ in length");
    if (!(f >= 0.0 && f <= 1.0))
        throw Error(errc::fraction_out_of_range,
                    "fill fraction must be in [0, 1], got " + std::to_string(f));
    return f * target + (1.0 - f) * background;
}

Spectrum adjacency_blend(const Spectrum& background, const Spectrum& target, double f, double rho,
                         double w) {
    if (background.size() != target.size())
        throw Error(errc::length_mismatch, "background and target spectra differ in length");
    if (!(f >= 0.0 && f <= 1.0))
        throw Error(errc::fraction_out_of_range,
                    "fill fraction must be in [0, 1], got " + std::to_string(f));
    if (!(w > 0.0))
        throw Error(errc::invalid_value, "adjacency width must be positive");
    if (rho < 0.0)
        throw Error(errc::invalid_value, "adjacency distance must be nonnegative");
    const double g = std::exp(-(rho * rho) / (w * w));
    return (g * f) * target + (1.0 - g * f) * background;
}

namespace {

void check_spectrum(const Spectrum& s, int bands, const char* what) {
    if (s.size() != bands)
        throw Error(errc::length_mismatch, std::string(what) + " must have " +
                                               std::to_string(bands) + " bands, has " +
                                               std::to_string(s.size()));
}

HyperCube synthesize_background(const SceneConfig& config) {
    const auto& bg = config.background;
    HyperCube cube(config.lines, config.samples, config.bands);

    if (bg.kind == BackgroundModel::Kind::FromCube) {
        if (bg.donor.lines() < config.lines || bg.donor.samples() < config.samples)
            throw Error(errc::invalid_value, "donor cube smaller than the requested scene");
        if (bg.donor.bands() != config.bands)
            throw Error(errc::length_mismatch, "donor cube band count differs from scene bands");
        for (int row = 0; row < config.lines; ++row)
            for (int col = 0; col < config.samples; ++col)
                for (int band = 0; band < config.bands; ++band)
                    cube.at(row, col, band) = bg.donor.at(row, col, band);
        return cube;
    }

    check_spectrum(bg.mean, config.bands, "background mean");
    check_spectrum(bg.stddev, config.bands, "background stddev");
    for (int b = 0; b < config.bands; ++b)
        if (bg.stddev[b] < 0.0)
            throw Error(errc::invalid_value, "background stddev must be nonnegative");

    Xoshiro256pp rng(config.rng_seed);
    if (bg.kind == BackgroundModel::Kind::GaussianIID) {
        for (int row = 0; row < config.lines; ++row)
            for (int col = 0; col < config.samples; ++col)
                for (int band = 0; band < config.bands; ++band)
                    cube.at(row, col, band) = bg.mean[band] + bg.stddev[band] * rng.gaussian();
        return cube;
    }

    // CorrelatedGaussian: AR(1) chain along the spectral axis so that
    // corr(band i, band j) = rho^|i-j| with unit marginal variance.
    const double rho = bg.band_correlation;
    if (!(rho > -1.0 && rho < 1.0))
        throw Error(errc::invalid_value, "band correlation must lie in (-1, 1)");
    const double innovation = std::sqrt(1.0 - rho * rho);
    for (int row = 0; row < config.lines; ++row) {
        for (int col = 0; col < config.samples; ++col) {
            double chain = 0.0;
            for (int band = 0; band < config.bands; ++band) {
                chain = band == 0 ? rng.gaussian() : rho * chain + innovation * rng.gaussian();
                cube.at(row, col, band) = bg.mean[band] + bg.stddev[band] * chain;
            }
        }
    }
    return cube;
}

} // namespace

std::pair<HyperCube, GroundTruthMask> generate_scene(const SceneConfig& config) {
    if (config.lines < 1 || config.samples < 1 || config.bands < 1)
        throw Error(errc::invalid_value, "scene dimensions must be positive");

    HyperCube cube = synthesize_background(config);
    GroundTruthMask truth;
    truth.lines = config.lines;
    truth.samples = config.samples;
    truth.mask.assign(static_cast<std::size_t>(config.lines) * config.samples, 0);

    for (std::size_t idx = 0; idx < config.implants.size(); ++idx) {
        const ImplantSpec& implant = config.implants[idx];
        check_spectrum(implant.target_spectrum, config.bands, "target spectrum");
        if (implant.footprint.empty())
            throw Error(errc::invalid_value, "implant footprint must be non-empty");

        std::vector<std::pair<int, int>> pixels;
        pixels.reserve(implant.footprint.size());
        for (auto [dr, dc] : implant.footprint) {
            const int r = implant.row + dr;
            const int c = implant.col + dc;
            if (r < 0 || r >= config.lines || c < 0 || c >= config.samples)
                throw Error(errc::out_of_bounds_implant,
                            "implant " + std::to_string(idx) + " footprint pixel (" +
                                std::to_string(r) + ", " + std::to_string(c) + ") outside scene");
            pixels.emplace_back(r, c);
        }

        for (auto [r, c] : pixels) {
            Spectrum bg = get_pixel_spectrum(cube, r, c);
            Spectrum mixed = implant_subpixel(bg, implant.target_spectrum, implant.fill_fraction);
            for (int band = 0; band < config.bands; ++band) cube.at(r, c, band) = mixed[band];
            truth.mask[static_cast<std::size_t>(r) * config.samples + c] = 1;
        }

        if (implant.adjacency_radius > 0) {
            // bounding box of the footprint, expanded by the radius
            int rmin = config.lines, rmax = -1, cmin = config.samples, cmax = -1;
            for (auto [r, c] : pixels) {
                rmin = std::min(rmin, r); rmax = std::max(rmax, r);
                cmin = std::min(cmin, c); cmax = std::max(cmax, c);
            }
            const int rad = implant.adjacency_radius;
            for (int r = std::max(0, rmin - rad); r <= std::min(config.lines - 1, rmax + rad); ++r) {
                for (int c = std::max(0, cmin - rad); c <= std::min(config.samples - 1, cmax + rad); ++c) {
                    bool in_footprint = false;
                    double best = std::numeric_limits<double>::infinity();
                    for (auto [fr, fc] : pixels) {
                        if (fr == r && fc == c) { in_footprint = true; break; }
                        const double d = std::hypot(r - fr, c - fc);
                        best = std::min(best, d);
                    }
                    if (in_footprint || best > implant.adjacency_radius) continue;
                    Spectrum bg = get_pixel_spectrum(cube, r, c);
                    Spectrum blended = adjacency_blend(bg, implant.target_spectrum,
                                                       implant.fill_fraction, best,
                                                       implant.adjacency_width);
                    for (int band = 0; band < config.bands; ++band) cube.at(r, c, band) = blended[band];
                }
            }
        }
    }
    return {std::move(cube), std::move(truth)};
}

namespace {

std::string lower_trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out;
    for (std::size_t i = b; i < e; ++i)
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
    return out;
}

std::string trim_copy(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(errc::invalid_value, what + ": not a number: '" + s + "'");
    }
}

long to_long(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(errc::invalid_value, what + ": not an integer: '" + s + "'");
    }
}

// Spectrum expressions: "constant v" | "ramp a b" | "peaks base amp center
// width [amp center width ...]" with center/width on a 0..1 band axis.
Spectrum parse_spectrum_expr(const std::string& expr, int bands) {
    auto tokens = split_ws(expr);
    if (tokens.empty()) throw Error(errc::invalid_value, "empty spectrum expression");
    Spectrum s(bands);
    const std::string kind = tokens[0];
    auto axis = [&](int b) { return bands > 1 ? static_cast<double>(b) / (bands - 1) : 0.0; };
    if (kind == "constant") {
        if (tokens.size() != 2) throw Error(errc::invalid_value, "constant expects one value");
        s.setConstant(to_double(tokens[1], "constant"));
    } else if (kind == "ramp") {
        if (tokens.size() != 3) throw Error(errc::invalid_value, "ramp expects two values");
        const double a = to_double(tokens[1], "ramp start");
        const double b = to_double(tokens[2], "ramp end");
        for (int i = 0; i < bands; ++i) s[i] = a + (b - a) * axis(i);
    } else if (kind == "peaks") {
        if (tokens.size() < 5 || (tokens.size() - 2) % 3 != 0)
            throw Error(errc::invalid_value, "peaks expects: base, then amp/center/width triples");
        const double base = to_double(tokens[1], "peaks base");
        s.setConstant(base);
        for (std::size_t t = 2; t + 2 < tokens.size(); t += 3) {
            const double amp = to_double(tokens[t], "peak amplitude");
            const double center = to_double(tokens[t + 1], "peak center");
            const double width = to_double(tokens[t + 2], "peak width");
            if (!(width > 0.0)) throw Error(errc::invalid_value, "peak width must be positive");
            for (int i = 0; i < bands; ++i) {
                const double u = (axis(i) - center) / width;
                s[i] += amp * std::exp(-u * u);
            }
        }
    } else {
        throw Error(errc::invalid_value, "unknown spectrum expression '" + kind + "'");
    }
    return s;
}

std::vector<std::pair<int, int>> parse_footprint(const std::string& value) {
    auto tokens = split_ws(value);
    if (tokens.empty()) throw Error(errc::invalid_value, "empty footprint");
    std::vector<std::pair<int, int>> offsets;
    if (tokens.size() == 1 && tokens[0].find('x') != std::string::npos) {
        // "RxC" block anchored at the implant location
        const auto x = tokens[0].find('x');
        const long rows = to_long(tokens[0].substr(0, x), "footprint rows");
        const long cols = to_long(tokens[0].substr(x + 1), "footprint cols");
        if (rows < 1 || cols < 1)
            throw Error(errc::invalid_value, "footprint block must be at least 1x1");
        for (long r = 0; r < rows; ++r)
            for (long c = 0; c < cols; ++c)
                offsets.emplace_back(static_cast<int>(r), static_cast<int>(c));
    } else {
        // explicit "r,c r,c ..." offsets
        for (const auto& tok : tokens) {
            const auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw Error(errc::invalid_value, "footprint offset '" + tok + "' is not r,c");
            offsets.emplace_back(
                static_cast<int>(to_long(tok.substr(0, comma), "footprint row offset")),
                static_cast<int>(to_long(tok.substr(comma + 1), "footprint col offset")));
        }
    }
    return offsets;
}

struct RawSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
    std::string require(const std::string& key) const {
        if (const auto* v = find(key)) return *v;
        throw Error(errc::missing_key, "[" + (name.empty() ? std::string("scene") : name) +
                                           "] section needs '" + key + "'");
    }
};

} // namespace

SceneConfig parse_scene_config(std::string_view text) {
    std::vector<RawSection> sections(1); // sections[0]: top-level keys
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t eol = text.find('\n', i);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line = trim_copy(text.substr(i, eol - i));
        i = eol + 1;
        if (line.empty() || line[0] == '#') {
            if (eol == text.size()) break;
            continue;
        }
        if (auto hash = line.find(" #"); hash != std::string::npos)
            line = trim_copy(line.substr(0, hash)); // trailing comment
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(errc::invalid_value, "malformed section header: " + line);
            sections.push_back({lower_trim(line.substr(1, line.size() - 2)), {}});
        } else {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw Error(errc::invalid_value, "expected key = value, got: " + line);
            sections.back().entries.emplace_back(lower_trim(line.substr(0, eq)),
                                                 trim_copy(line.substr(eq + 1)));
        }
        if (eol == text.size()) break;
    }

    SceneConfig config;
    const RawSection& top = sections[0];
    config.lines = static_cast<int>(to_long(top.require("lines"), "lines"));
    config.samples = static_cast<int>(to_long(top.require("samples"), "samples"));
    config.bands = static_cast<int>(to_long(top.require("bands"), "bands"));
    config.rng_seed = static_cast<std::uint64_t>(to_long(top.require("seed"), "seed"));
    if (config.lines < 1 || config.samples < 1 || config.bands < 1)
        throw Error(errc::invalid_value, "scene dimensions must be positive");

    bool saw_background = false;
    for (std::size_t s = 1; s < sections.size(); ++s) {
        const RawSection& sec = sections[s];
        if (sec.name == "background") {
            saw_background = true;
            BackgroundModel& bg = config.background;
            const std::string model = lower_trim(sec.require("model"));
            if (model == "gaussian_iid") bg.kind = BackgroundModel::Kind::GaussianIID;
            else if (model == "correlated") bg.kind = BackgroundModel::Kind::CorrelatedGaussian;
            else if (model == "from_cube") bg.kind = BackgroundModel::Kind::FromCube;
            else throw Error(errc::invalid_value, "unknown background model '" + model + "'");

            if (bg.kind == BackgroundModel::Kind::FromCube) {
                bg.donor = load_cube(sec.require("donor"));
            } else {
                bg.mean = parse_spectrum_expr(sec.require("mean"), config.bands);
                bg.stddev = parse_spectrum_expr(sec.require("stddev"), config.bands);
                if (bg.kind == BackgroundModel::Kind::CorrelatedGaussian)
                    bg.band_correlation = to_double(sec.require("correlation"), "correlation");
            }
        } else if (sec.name == "implant") {
            ImplantSpec implant;
            implant.row = static_cast<int>(to_long(sec.require("row"), "implant row"));
            implant.col = static_cast<int>(to_long(sec.require("col"), "implant col"));
            if (const auto* fp = sec.find("footprint")) implant.footprint = parse_footprint(*fp);
            implant.target_spectrum = parse_spectrum_expr(sec.require("spectrum"), config.bands);
            if (const auto* f = sec.find("fraction"))
                implant.fill_fraction = to_double(*f, "fraction");
            if (const auto* r = sec.find("adjacency_radius"))
                implant.adjacency_radius = static_cast<int>(to_long(*r, "adjacency_radius"));
            if (const auto* w = sec.find("adjacency_width"))
                implant.adjacency_width = to_double(*w, "adjacency_width");
            if (implant.adjacency_radius < 0)
                throw Error(errc::invalid_value, "adjacency_radius must be nonnegative");
            config.implants.push_back(std::move(implant));
        } else {
            throw Error(errc::invalid_value, "unknown section [" + sec.name + "]");
        }
    }
    if (!saw_background)
        throw Error(errc::missing_key, "scene config needs a [background] section");
    return config;
}

SceneConfig load_scene_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io_failure, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scene_config(buffer.str());
}

PgmImage mask_to_pgm(const GroundTruthMask& mask) {
    PgmImage image;
    image.width = mask.samples;
    image.height = mask.lines;
    image.pixels.resize(mask.mask.size());
    std::transform(mask.mask.begin(), mask.mask.end(), image.pixels.begin(),
                   [](std::uint8_t v) { return v ? std::uint8_t{255} : std::uint8_t{0}; });
    return image;
}

GroundTruthMask mask_from_pgm(const PgmImage& image) {
    GroundTruthMask mask;
    mask.lines = image.height;
    mask.samples = image.width;
    mask.mask.resize(image.pixels.size());
    std::transform(image.pixels.begin(), image.pixels.end(), mask.mask.begin(),
                   [](std::uint8_t v) { return v >= 128 ? std::uint8_t{1} : std::uint8_t{0}; });
    return mask;
}

} // namespace hsad
