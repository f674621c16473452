#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace deepsupp {

// Dense row-major matrix of doubles. Small fixed shapes throughout the
// pipeline (32x32 attention blocks, 5x5 correlation blocks), so plain
// loops are all we need.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::size_t size() const { return a.size(); }

    void fill(double v) { a.assign(a.size(), v); }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

inline Mat matmul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows)
        throw std::invalid_argument("matmul: shape mismatch");
    Mat out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t k = 0; k < x.cols; ++k) {
            double xv = x(i, k);
            if (xv == 0.0)
                continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                out(i, j) += xv * y(k, j);
        }
    }
    return out;
}

// x^T * y
inline Mat matmul_tn(const Mat& x, const Mat& y) {
    if (x.rows != y.rows)
        throw std::invalid_argument("matmul_tn: shape mismatch");
    Mat out(x.cols, y.cols);
    for (std::size_t k = 0; k < x.rows; ++k) {
        for (std::size_t i = 0; i < x.cols; ++i) {
            double xv = x(k, i);
            if (xv == 0.0)
                continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                out(i, j) += xv * y(k, j);
        }
    }
    return out;
}

// x * y^T
inline Mat matmul_nt(const Mat& x, const Mat& y) {
    if (x.cols != y.cols)
        throw std::invalid_argument("matmul_nt: shape mismatch");
    Mat out(x.rows, y.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < y.rows; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.cols; ++k)
                s += x(i, k) * y(j, k);
            out(i, j) = s;
        }
    }
    return out;
}

}  // namespace deepsupp
