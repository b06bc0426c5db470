#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "errors.hpp"
#include "field.hpp"

namespace hsld {

// Renders a field as a binary PPM (P6) image through a fixed five-stop ramp,
// blue -> cyan -> green -> yellow -> red at t = 0, .25, .5, .75, 1 with linear
// interpolation, after linear min-max scaling.  A constant field maps to the
// mid-ramp color.  Image row 0 is the TOP of the domain (y = L): display
// flips matrix rows; data files never do.

namespace detail {

inline void ramp_color(double t, unsigned char rgb[3]) {
    static constexpr double stops[5][3] = {
        {0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}};
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * 4.0;
    const int k = std::min(3, (int)pos);
    const double f = pos - k;
    for (int c = 0; c < 3; ++c) {
        const double v = stops[k][c] + f * (stops[k + 1][c] - stops[k][c]);
        rgb[c] = (unsigned char)std::lround(v);
    }
}

}  // namespace detail

inline std::string render_heatmap(const Matrix& field) {
    if (field.size() == 0) throw DomainError("cannot render an empty field");
    double lo = field.data()[0], hi = field.data()[0];
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double v = field.data()[i];
        if (!std::isfinite(v)) throw DomainError("cannot render non-finite values");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::string out = "P6\n" + std::to_string(field.cols()) + " " +
                      std::to_string(field.rows()) + "\n255\n";
    out.reserve(out.size() + 3 * field.size());
    const double range = hi - lo;
    for (std::size_t img_r = 0; img_r < field.rows(); ++img_r) {
        const std::size_t r = field.rows() - 1 - img_r;  // flip for display
        for (std::size_t c = 0; c < field.cols(); ++c) {
            const double t = range > 0 ? (field(r, c) - lo) / range : 0.5;
            unsigned char rgb[3];
            detail::ramp_color(t, rgb);
            out.append((const char*)rgb, 3);
        }
    }
    return out;
}

inline void render_heatmap_file(const Matrix& field, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const auto bytes = render_heatmap(field);
    out.write(bytes.data(), (std::streamsize)bytes.size());
    if (!out) throw IoError("write failed for " + path.string());
}

}
