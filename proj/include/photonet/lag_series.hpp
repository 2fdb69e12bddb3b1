// lag_series.hpp — Block sequences of small dense matrices sampled on a uniform grid

#pragma once

#include <Eigen/Dense>

namespace photonet {

// A sequence X_0, X_1, ..., X_{K-1} of equally sized blocks, stored stacked vertically
// in one column-major matrix so that partial sums like sum_j A_j X_j reduce to a single
// dense product against topRows().
template <typename Scalar>
class LagSeries {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    LagSeries() = default;
    LagSeries(Eigen::Index length, Eigen::Index rows, Eigen::Index cols)
        : rows_(rows), cols_(cols), data_(Matrix::Zero(length * rows, cols)) {}

    Eigen::Index size() const { return rows_ == 0 ? 0 : data_.rows() / rows_; }
    Eigen::Index block_rows() const { return rows_; }
    Eigen::Index block_cols() const { return cols_; }

    auto operator[](Eigen::Index k) { return data_.middleRows(k * rows_, rows_); }
    auto operator[](Eigen::Index k) const { return data_.middleRows(k * rows_, rows_); }

    // Blocks 0..count-1 stacked vertically.
    auto head(Eigen::Index count) const { return data_.topRows(count * rows_); }
    auto head(Eigen::Index count) { return data_.topRows(count * rows_); }

    const Matrix& stacked() const { return data_; }
    Matrix& stacked() { return data_; }

    // Blocks laid side by side: rows x (cols * size).
    Matrix wide() const {
        Matrix out(rows_, cols_ * size());
        for (Eigen::Index k = 0; k < size(); ++k) {
            out.middleCols(k * cols_, cols_) = (*this)[k];
        }
        return out;
    }

    // Side by side in reverse order: block m holds X_{size-1-m}.
    Matrix reversed_wide() const {
        const Eigen::Index n = size();
        Matrix out(rows_, cols_ * n);
        for (Eigen::Index k = 0; k < n; ++k) {
            out.middleCols((n - 1 - k) * cols_, cols_) = (*this)[k];
        }
        return out;
    }

    // Stacked vertically in reverse order: block m holds X_{size-1-m}.
    LagSeries reversed() const {
        const Eigen::Index n = size();
        LagSeries out(n, rows_, cols_);
        for (Eigen::Index k = 0; k < n; ++k) {
            out[n - 1 - k] = (*this)[k];
        }
        return out;
    }

    // Blockwise conjugate transpose, order preserved.
    LagSeries adjoint() const {
        LagSeries out(size(), cols_, rows_);
        for (Eigen::Index k = 0; k < size(); ++k) {
            out[k] = (*this)[k].adjoint();
        }
        return out;
    }

    LagSeries& operator+=(const LagSeries& other) {
        data_ += other.data_;
        return *this;
    }

private:
    Eigen::Index rows_{0};
    Eigen::Index cols_{0};
    Matrix data_;
};

using ComplexSeries = LagSeries<std::complex<double>>;

} // namespace photonet
