#pragma once

#include <cstddef>
#include <vector>

namespace hsld {

// Dense row-major matrix of doubles.  When holding a physical field, row 0 is
// the bottom of the domain (y = 0) and column 0 the left edge (x = 0).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Source matrix phi in W/m^2: nonzero cells carry their component's intensity.
using IntensityField = Matrix;
// Steady-state temperature matrix in K.
using TemperatureField = Matrix;

}
