#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pwp/errors.hpp"

namespace pwp {

// Dense row-major matrix of doubles. Just enough linear algebra for the
// influence computations; sizes here are small (n = nodes or links).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    bool all_finite() const noexcept {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    // max absolute row sum
    double inf_norm() const noexcept {
        double best = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            if (s > best) best = s;
        }
        return best;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator*=(double c) {
        for (double& v : data_) v *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator*(Matrix a, double c) { return a *= c; }
    friend Matrix operator*(double c, Matrix a) { return a *= c; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols() != b.rows())
            throw DimensionMismatch("matrix product: inner dimensions disagree");
        Matrix c(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch("matrix shapes disagree");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("max_abs_diff: shapes disagree");
    double best = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        best = std::max(best, std::abs(a.data()[k] - b.data()[k]));
    return best;
}

// e^A - I by scaling and squaring with a truncated Taylor kernel.
// Working on N = e^A - I directly (doubling rule N <- N^2 + 2N) keeps the
// small-lambda regime free of the cancellation in forming e^A then
// subtracting I. Kernel tolerance 1e-12 in the infinity norm; the scaling
// exponent s is chosen so ||A||_inf / 2^s <= 0.5.
inline Matrix expm_minus_identity(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("expm_minus_identity: matrix must be square");
    if (!a.all_finite())
        throw NonFiniteInput("expm_minus_identity: non-finite entry");

    const double norm = a.inf_norm();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));

    Matrix b = a * std::ldexp(1.0, -s);
    Matrix sum = b;
    Matrix term = b;
    for (int k = 2; k <= 40; ++k) {
        term = term * b;
        term *= 1.0 / k;
        sum += term;
        if (term.inf_norm() <= 1e-16 * std::max(1.0, sum.inf_norm())) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum + 2.0 * sum;

    if (!sum.all_finite())
        throw NonFiniteInput("expm_minus_identity: overflow in exponential");
    return sum;
}

}  // namespace pwp
