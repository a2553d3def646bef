#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <string>

#include "thinfilm/errors.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/reynolds.hpp"

namespace thinfilm {

/// 17 significant digits, '.' decimal point, locale-independent.
inline std::string format_value(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

/// Shortest round-trip rendering, used for file-name suffixes.
inline std::string format_value_short(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) throw SolverError("cannot open output file '" + path + "'");
    return out;
}

} // namespace detail

/// Columns: x, q, p.
inline void write_pressure_csv(const std::string& path, const PressureSolution& sol) {
    auto out = detail::open_output(path);
    out << "x,q,p\n";
    for (std::size_t i = 0; i < sol.x.size(); ++i)
        out << format_value(sol.x[i]) << ',' << format_value(sol.q[i]) << ','
            << format_value(sol.p[i]) << '\n';
}

/// Columns: x, z (or y for rescaled fields), u1, u2, sigma11, sigma12,
/// sigma22; stations outer, heights inner.
inline void write_fields_csv(const std::string& path, const LimitFields& f) {
    auto out = detail::open_output(path);
    out << (f.epsilon == 1.0 ? "x,z,u1,u2,sigma11,sigma12,sigma22\n"
                             : "x,y,u1,u2,sigma11,sigma12,sigma22\n");
    for (std::size_t i = 0; i < f.stations(); ++i)
        for (std::size_t j = 0; j < f.rows(); ++j)
            out << format_value(f.x[i]) << ',' << format_value(f.z[i][j]) << ','
                << format_value(f.u1[i][j]) << ',' << format_value(f.u2[i][j]) << ','
                << format_value(f.s11[i][j]) << ',' << format_value(f.s12[i][j]) << ','
                << format_value(f.s22[i][j]) << '\n';
}

} // namespace thinfilm
