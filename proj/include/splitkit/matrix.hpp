#pragma once

#include <splitkit/rational.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace splitkit {

/// Dense matrix over an exact ring (Rat or Int). Division is only used by the
/// Rat instantiation (Gaussian elimination, inverse, nullspace).
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    Mat operator+(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
        Mat r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }

    Mat operator-(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference shape mismatch");
        Mat r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }

    Mat operator-() const {
        Mat r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }

    Mat scaled(const T& c) const {
        Mat r = *this;
        for (auto& x : r.data_) x *= c;
        return r;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
    }
    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }
    bool is_antisymmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if ((*this)(i, j) != -(*this)(j, i)) return false;
        return true;
    }

    Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Mat b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    std::vector<T> col(std::size_t j) const {
        std::vector<T> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using RatMat = Mat<Rat>;
using IntMat = Mat<Int>;

inline RatMat to_rat(const IntMat& m) {
    RatMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

/// Row echelon reduction in place; returns pivot column per pivot row.
inline std::vector<std::size_t> rref(RatMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(row, p);
        const Rat inv = Rat(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            const Rat f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(RatMat m) { return rref(m).size(); }

/// Basis of {x : Ax = 0}, returned as columns.
inline RatMat nullspace(RatMat a) {
    const std::size_t n = a.cols();
    const auto pivots = rref(a);
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    RatMat ns(n, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        const std::size_t fc = free_cols[k];
        ns(fc, k) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) ns(pivots[r], k) = -a(r, fc);
    }
    return ns;
}

/// Solves Ax = b; nullopt when inconsistent. Requires unique solution only if
/// the caller knows A has full column rank; otherwise one solution is returned.
inline std::optional<RatMat> solve(RatMat a, RatMat b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve shape mismatch");
    const std::size_t n = a.cols(), k = b.cols();
    RatMat aug(a.rows(), n + k);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < k; ++j) aug(i, n + j) = b(i, j);
    }
    const auto pivots = rref(aug);
    for (auto p : pivots)
        if (p >= n) return std::nullopt;
    RatMat x(n, k);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        for (std::size_t j = 0; j < k; ++j) x(pivots[r], j) = aug(r, n + j);
    return x;
}

inline std::optional<RatMat> inverse(const RatMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
    auto x = solve(a, RatMat::identity(a.rows()));
    if (!x) return std::nullopt;
    if (rank(a) != a.rows()) return std::nullopt;
    return x;
}

inline Rat determinant(RatMat m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    Rat det(1);
    const std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && m(p, col) == 0) ++p;
        if (p == n) return Rat(0);
        if (p != col) {
            m.swap_rows(col, p);
            det = -det;
        }
        det *= m(col, col);
        const Rat inv = Rat(1) / m(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            const Rat f = m(i, col) * inv;
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

/// Smith diagonalization A = U * S * V with U, V unimodular and S diagonal
/// (invariant-factor divisibility is not enforced; diagonal entries are
/// nonnegative). Enough for primitivity tests and lattice complements.
struct SmithResult {
    IntMat u, s, v;
};

inline SmithResult smith_diagonalize(IntMat a) {
    const std::size_t m = a.rows(), n = a.cols();
    IntMat u = IntMat::identity(m);
    IntMat v = IntMat::identity(n);

    // Row op R_i -= q R_t on S corresponds to U: C_t += q C_i (keeps A = U S V).
    auto row_sub = [&](std::size_t i, std::size_t t, const Int& q) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) -= q * a(t, j);
        for (std::size_t r = 0; r < m; ++r) u(r, t) += q * u(r, i);
    };
    auto col_sub = [&](std::size_t j, std::size_t t, const Int& q) {
        for (std::size_t i = 0; i < m; ++i) a(i, j) -= q * a(i, t);
        for (std::size_t c = 0; c < n; ++c) v(t, c) += q * v(j, c);
    };
    auto row_swap = [&](std::size_t i, std::size_t t) {
        a.swap_rows(i, t);
        u.swap_cols(i, t);
    };
    auto col_swap = [&](std::size_t j, std::size_t t) {
        a.swap_cols(j, t);
        // swapping rows j,t of V
        for (std::size_t c = 0; c < n; ++c) std::swap(v(j, c), v(t, c));
    };
    auto row_neg = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = -a(i, j);
        for (std::size_t r = 0; r < m; ++r) u(r, i) = -u(r, i);
    };

    const std::size_t steps = std::min(m, n);
    for (std::size_t t = 0; t < steps; ++t) {
        // locate smallest nonzero |entry| in the trailing block
        bool found = false;
        std::size_t bi = t, bj = t;
        Int best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (a(i, j) == 0) continue;
                Int v2 = abs(a(i, j));
                if (!found || v2 < best) {
                    found = true;
                    best = v2;
                    bi = i;
                    bj = j;
                }
            }
        if (!found) break;
        row_swap(bi, t);
        col_swap(bj, t);
        for (;;) {
            bool again = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a(i, t) == 0) continue;
                Int q = a(i, t) / a(t, t);
                row_sub(i, t, q);
                if (a(i, t) != 0) {
                    row_swap(i, t);  // remainder is smaller; restart reduction
                    again = true;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0) continue;
                Int q = a(t, j) / a(t, t);
                col_sub(j, t, q);
                if (a(t, j) != 0) {
                    col_swap(j, t);
                    again = true;
                }
            }
            if (!again) break;
        }
        if (a(t, t) < 0) row_neg(t);
    }
    return {std::move(u), std::move(a), std::move(v)};
}

inline Int int_determinant(const IntMat& m) {
    Rat d = determinant(to_rat(m));
    if (denominator(d) != 1) throw std::logic_error("integer determinant not integral");
    return numerator(d);
}

}  // namespace splitkit
