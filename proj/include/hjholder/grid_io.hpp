/**
 * @file grid_io.hpp
 * @brief GridFunction serialization (binary and CSV).
 *
 * Binary layout, all little-endian:
 *   bytes 0..7   magic "HJGRID01"
 *   u64          d
 *   f64[d]       origin
 *   f64[d]       spacing
 *   u64[d]       extent
 *   f64          t0
 *   f64          dt
 *   u64          nt
 *   f64[...]     values in storage order (time-major, axis 0 fastest)
 *
 * CSV layout: header rows "key,v1,v2,..." for dim, origin, spacing, extent,
 * time_origin, time_spacing, time_extent, then a row "values" followed by one
 * value per line in storage order. Lines starting with '#' are comments.
 */

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hjholder/core.hpp"

namespace hjholder::io {

namespace detail {

inline constexpr char kMagic[8] = {'H', 'J', 'G', 'R', 'I', 'D', '0', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(sizeof(T) == 8);
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

template <class T>
T get_le(std::istream& is) {
    static_assert(sizeof(T) == 8);
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    require(static_cast<bool>(is), Errc::InvalidInput, "truncated binary grid file");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    T v;
    std::memcpy(&v, &bits, 8);
    return v;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        raise(Errc::InvalidInput, "not a number: '" + s + "'");
    }
    require(pos == s.size() || s.find_first_not_of(" \t\r", pos) == std::string::npos,
            Errc::InvalidInput, "trailing characters in number: '" + s + "'");
    return v;
}

}  // namespace detail

inline void write_binary(std::ostream& os, const GridFunction& u) {
    const auto& g = u.geometry();
    os.write(detail::kMagic, 8);
    detail::put_le<std::uint64_t>(os, g.dim());
    for (double v : g.origin()) detail::put_le(os, v);
    for (double v : g.spacing()) detail::put_le(os, v);
    for (auto v : g.extent()) detail::put_le<std::uint64_t>(os, v);
    detail::put_le(os, g.t0());
    detail::put_le(os, g.dt());
    detail::put_le<std::uint64_t>(os, g.nt());
    for (double v : u.values()) detail::put_le(os, v);
}

inline GridFunction read_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    require(static_cast<bool>(is) && std::memcmp(magic, detail::kMagic, 8) == 0,
            Errc::InvalidInput, "not an HJGRID01 binary file");
    const auto d = detail::get_le<std::uint64_t>(is);
    require(d >= 1 && d <= 16, Errc::InvalidInput, "implausible grid dimension");
    Point origin(d);
    std::vector<double> spacing(d);
    std::vector<std::size_t> extent(d);
    for (auto& v : origin) v = detail::get_le<double>(is);
    for (auto& v : spacing) v = detail::get_le<double>(is);
    for (auto& v : extent) v = static_cast<std::size_t>(detail::get_le<std::uint64_t>(is));
    const double t0 = detail::get_le<double>(is);
    const double dt = detail::get_le<double>(is);
    const auto nt = static_cast<std::size_t>(detail::get_le<std::uint64_t>(is));
    GridGeometry g(std::move(origin), std::move(spacing), std::move(extent), t0, dt, nt);
    std::vector<double> vals(g.size());
    for (auto& v : vals) v = detail::get_le<double>(is);
    return {std::move(g), std::move(vals)};
}

inline void write_csv(std::ostream& os, const GridFunction& u) {
    const auto& g = u.geometry();
    os << std::setprecision(17);
    os << "# hjholder grid function v1\n";
    os << "dim," << g.dim() << "\n";
    os << "origin";
    for (double v : g.origin()) os << "," << v;
    os << "\nspacing";
    for (double v : g.spacing()) os << "," << v;
    os << "\nextent";
    for (auto v : g.extent()) os << "," << v;
    os << "\ntime_origin," << g.t0() << "\n";
    os << "time_spacing," << g.dt() << "\n";
    os << "time_extent," << g.nt() << "\n";
    os << "values\n";
    for (double v : u.values()) os << v << "\n";
}

inline GridFunction read_csv(std::istream& is) {
    std::string line;
    std::size_t d = 0;
    Point origin;
    std::vector<double> spacing;
    std::vector<std::size_t> extent;
    double t0 = 0.0, dt = 0.0;
    std::size_t nt = 0;
    bool in_values = false;
    std::vector<double> vals;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (in_values) {
            vals.push_back(detail::parse_double(line));
            continue;
        }
        auto cells = detail::split_csv(line);
        const std::string& key = cells[0];
        auto numbers = [&] {
            std::vector<double> out;
            for (std::size_t i = 1; i < cells.size(); ++i) out.push_back(detail::parse_double(cells[i]));
            return out;
        };
        if (key == "dim") {
            d = static_cast<std::size_t>(numbers().at(0));
        } else if (key == "origin") {
            origin = numbers();
        } else if (key == "spacing") {
            spacing = numbers();
        } else if (key == "extent") {
            for (double v : numbers()) extent.push_back(static_cast<std::size_t>(v));
        } else if (key == "time_origin") {
            t0 = numbers().at(0);
        } else if (key == "time_spacing") {
            dt = numbers().at(0);
        } else if (key == "time_extent") {
            nt = static_cast<std::size_t>(numbers().at(0));
        } else if (key == "values") {
            in_values = true;
        } else {
            raise(Errc::InvalidInput, "unknown CSV header row '" + key + "'");
        }
    }
    require(in_values, Errc::InvalidInput, "CSV grid has no 'values' row");
    require(origin.size() == d, Errc::InvalidInput, "CSV origin does not match dim");
    GridGeometry g(std::move(origin), std::move(spacing), std::move(extent), t0, dt, nt);
    return {std::move(g), std::move(vals)};
}

/// Format chosen by extension: ".csv" is CSV, anything else binary.
inline void save(const std::string& path, const GridFunction& u) {
    const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
    std::ofstream os(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
    require(static_cast<bool>(os), Errc::InvalidInput, "cannot open '" + path + "' for writing");
    if (csv) write_csv(os, u); else write_binary(os, u);
}

inline GridFunction load(const std::string& path) {
    const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
    std::ifstream is(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
    require(static_cast<bool>(is), Errc::InvalidInput, "cannot open '" + path + "'");
    return csv ? read_csv(is) : read_binary(is);
}

}  // namespace hjholder::io
