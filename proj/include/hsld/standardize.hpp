#pragma once

#include "errors.hpp"
#include "field.hpp"

namespace hsld {

// Affine standardization applied before training/inference: inputs use
// (X - 0)/1000, labels (Y - 298)/s with s = 50 for boundary-dissipation
// problems (cases 1 and 2) and 100 for the point-sink problem (case 3).
struct StandardizationParams {
    double x_mean = 0.0;
    double x_std = 1000.0;
    double y_mean = 298.0;
    double y_std = 50.0;
};

inline StandardizationParams standardization_for_case(int case_id) {
    StandardizationParams p;
    if (case_id == 3) p.y_std = 100.0;
    else if (case_id != 1 && case_id != 2)
        throw DomainError("case_id must be 1, 2 or 3");
    return p;
}

namespace detail {
inline Matrix affine(const Matrix& m, double shift, double scale) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = (m.data()[i] + shift) * scale;
    return out;
}
}  // namespace detail

inline Matrix standardize_input(const Matrix& x, const StandardizationParams& p) {
    return detail::affine(x, -p.x_mean, 1.0 / p.x_std);
}
inline Matrix unstandardize_input(const Matrix& x, const StandardizationParams& p) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = x.data()[i] * p.x_std + p.x_mean;
    return out;
}
inline Matrix standardize_label(const Matrix& y, const StandardizationParams& p) {
    return detail::affine(y, -p.y_mean, 1.0 / p.y_std);
}
inline Matrix unstandardize_label(const Matrix& y, const StandardizationParams& p) {
    Matrix out(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.size(); ++i) out.data()[i] = y.data()[i] * p.y_std + p.y_mean;
    return out;
}

}
