#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/docmodel.hpp"
#include "bldet/geometry.hpp"
#include "bldet/synth.hpp"

namespace bldet {

inline void atomic_write_text(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("failed while writing file: " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot finalize file: " + path.string() + ": " + ec.message());
    }
}

namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline long long parse_int(std::string_view token, std::size_t line_number) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("expected integer, got '" + std::string(token) + "'", line_number);
    return value;
}

inline double parse_real(std::string_view token, std::size_t line_number) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(std::string(token), &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing junk");
        return value;
    } catch (const std::exception&) {
        throw ParseError("expected number, got '" + std::string(token) + "'", line_number);
    }
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace detail

// Baselines (and region polygons) are stored one polyline per line as
// semicolon-separated integer points: "x1,y1;x2,y2;...". Origin is the
// image's top-left corner.
inline std::string format_baselines(const std::vector<Polyline>& lines) {
    std::string out;
    for (const Polyline& line : lines) {
        long long last_x = 0, last_y = 0;
        bool first = true;
        std::string row;
        for (const Point& p : line.points) {
            const long long x = std::llround(p.x);
            const long long y = std::llround(p.y);
            if (!first && x == last_x && y == last_y) continue;  // rounding can merge neighbors
            if (!first) row.push_back(';');
            row += std::to_string(x) + "," + std::to_string(y);
            last_x = x;
            last_y = y;
            first = false;
        }
        if (row.find(';') == std::string::npos) continue;  // sub-pixel line, nothing to keep
        out += row;
        out.push_back('\n');
    }
    return out;
}

inline void write_baselines(const std::filesystem::path& path, const std::vector<Polyline>& lines) {
    atomic_write_text(path, format_baselines(lines));
}

inline std::vector<Polyline> parse_baselines(const std::vector<std::string>& lines) {
    std::vector<Polyline> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_number = i + 1;
        if (lines[i].empty()) continue;
        Polyline poly;
        for (std::string_view token : detail::split(lines[i], ';')) {
            const auto coords = detail::split(token, ',');
            if (coords.size() != 2) throw ParseError("expected 'x,y', got '" + std::string(token) + "'", line_number);
            const Point p{static_cast<double>(detail::parse_int(coords[0], line_number)),
                          static_cast<double>(detail::parse_int(coords[1], line_number))};
            if (poly.points.empty() || !(poly.points.back() == p)) poly.points.push_back(p);
        }
        if (poly.points.size() < 2) throw ParseError("polyline needs at least 2 distinct points", line_number);
        out.push_back(std::move(poly));
    }
    return out;
}

inline std::vector<Polyline> read_baselines(const std::filesystem::path& path) {
    return parse_baselines(detail::read_lines(path));
}

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line;
};

// Generic "key=value" lines; '#' starts a comment, blank lines are skipped.
inline std::vector<KeyValue> parse_keyvalues(const std::vector<std::string>& lines) {
    std::vector<KeyValue> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line(lines[i]);
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key=value'", i + 1);
        out.push_back({std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)), i + 1});
    }
    return out;
}

inline std::string format_properties(const DocumentProperties& props) {
    std::ostringstream out;
    out << "spac=" << props.spac << "\n"
        << "dblp=" << props.dblp << "\n"
        << "lnds=" << props.lnds << "\n"
        << "notxt=" << props.notxt << "\n";
    return out.str();
}

inline void write_properties(const std::filesystem::path& path, const DocumentProperties& props) {
    atomic_write_text(path, format_properties(props));
}

inline DocumentProperties parse_properties(const std::vector<std::string>& lines) {
    DocumentProperties props;
    bool seen[4] = {false, false, false, false};
    for (const auto& [key, value, line_number] : parse_keyvalues(lines)) {
        double* field = nullptr;
        int slot = -1;
        if (key == "spac") field = &props.spac, slot = 0;
        else if (key == "dblp") field = &props.dblp, slot = 1;
        else if (key == "lnds") field = &props.lnds, slot = 2;
        else if (key == "notxt") field = &props.notxt, slot = 3;
        else throw ParseError("unknown property '" + key + "'", line_number);
        if (seen[slot]) throw ParseError("duplicate property '" + key + "'", line_number);
        seen[slot] = true;
        *field = detail::parse_real(value, line_number);
    }
    const char* names[4] = {"spac", "dblp", "lnds", "notxt"};
    for (int i = 0; i < 4; ++i)
        if (!seen[i]) throw ParseError(std::string("missing property '") + names[i] + "'", lines.size());
    props.validate();
    return props;
}

inline DocumentProperties read_properties(const std::filesystem::path& path) {
    return parse_properties(detail::read_lines(path));
}

inline SynthSpec parse_synth_spec(const std::vector<std::string>& lines) {
    SynthSpec spec;
    for (const auto& [key, value, line_number] : parse_keyvalues(lines)) {
        if (key == "page_w") spec.page_w = static_cast<int>(detail::parse_int(value, line_number));
        else if (key == "page_h") spec.page_h = static_cast<int>(detail::parse_int(value, line_number));
        else if (key == "n_lines") spec.n_lines = static_cast<int>(detail::parse_int(value, line_number));
        else if (key == "leading") spec.leading = detail::parse_real(value, line_number);
        else if (key == "skew") spec.skew = detail::parse_real(value, line_number);
        else if (key == "columns") spec.columns = static_cast<int>(detail::parse_int(value, line_number));
        else if (key == "margin_text") {
            if (value == "true" || value == "1") spec.margin_text = true;
            else if (value == "false" || value == "0") spec.margin_text = false;
            else throw ParseError("margin_text must be 0/1/true/false", line_number);
        } else if (key == "seed") spec.seed = static_cast<std::uint64_t>(detail::parse_int(value, line_number));
        else throw ParseError("unknown synth key '" + key + "'", line_number);
    }
    spec.validate();
    return spec;
}

inline SynthSpec read_synth_spec(const std::filesystem::path& path) {
    return parse_synth_spec(detail::read_lines(path));
}

}  // namespace bldet
