#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bldet/common.hpp"
#include "bldet/raster.hpp"

namespace bldet {

namespace detail {

// Next PGM header token, skipping whitespace and '#' comments.
inline std::string pgm_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    if (token.empty()) throw IoError("unexpected end of PGM header");
    return token;
}

inline int pgm_int(std::istream& in) {
    const std::string token = pgm_token(in);
    try {
        std::size_t pos = 0;
        const int value = std::stoi(token, &pos);
        if (pos != token.size()) throw IoError("bad integer in PGM header: " + token);
        return value;
    } catch (const std::exception&) {
        throw IoError("bad integer in PGM header: " + token);
    }
}

}  // namespace detail

// Reads P5 (binary) or P2 (ASCII) grayscale images with maxval up to 255;
// gray value v maps to probability v / maxval.
inline ProbabilityGrid read_pgm(std::istream& in) {
    const std::string magic = detail::pgm_token(in);
    if (magic != "P5" && magic != "P2") throw IoError("unsupported PNM magic '" + magic + "' (want P2 or P5)");
    const int width = detail::pgm_int(in);
    const int height = detail::pgm_int(in);
    const int maxval = detail::pgm_int(in);
    if (width < 1 || height < 1) throw IoError("PGM dimensions must be positive");
    if (maxval < 1 || maxval > 255) throw IoError("PGM maxval must lie in [1,255]");

    ProbabilityGrid grid(width, height, 0.0);
    if (magic == "P5") {
        // header ends with exactly one whitespace byte (already consumed by tokenizer)
        std::string data(static_cast<std::size_t>(width) * height, '\0');
        in.read(data.data(), static_cast<std::streamsize>(data.size()));
        if (in.gcount() != static_cast<std::streamsize>(data.size())) throw IoError("truncated P5 pixel data");
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                grid.at(x, y) =
                    static_cast<double>(static_cast<unsigned char>(data[static_cast<std::size_t>(y) * width + x])) / maxval;
    } else {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                int v = 0;
                if (!(in >> v)) throw IoError("truncated P2 pixel data");
                if (v < 0 || v > maxval) throw IoError("P2 pixel value out of range");
                grid.at(x, y) = static_cast<double>(v) / maxval;
            }
    }
    return grid;
}

inline ProbabilityGrid read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image file: " + path.string());
    try {
        return read_pgm(in);
    } catch (const IoError& ex) {
        throw IoError(path.string() + ": " + ex.what());
    }
}

inline void write_pgm(std::ostream& out, const ProbabilityGrid& grid) {
    out << "P5\n" << grid.width() << " " << grid.height() << "\n255\n";
    std::string data;
    data.reserve(grid.size());
    for (double v : grid.values()) data.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

// Atomic file write: the image appears under its final name only when
// complete.
inline void write_pgm(const std::filesystem::path& path, const ProbabilityGrid& grid) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write image file: " + path.string());
        write_pgm(out, grid);
        if (!out) throw IoError("failed while writing image file: " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot finalize image file: " + path.string() + ": " + ec.message());
    }
}

}  // namespace bldet
