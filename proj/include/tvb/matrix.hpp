#pragma once

// Dense rational and integer matrices with exact row reduction, kernels,
// Smith and Hermite normal forms, and integer linear system solving.

#include "tvb/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>

namespace tvb {

class QMat {
  public:
    QMat() = default;
    QMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static QMat identity(std::size_t n) {
        QMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static QMat from_rows(const std::vector<QVec>& rows, std::size_t cols) {
        QMat m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("from_rows: ragged input");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    QVec row(std::size_t i) const {
        QVec r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    void append_row(const QVec& r) {
        if (r.size() != cols_) throw std::invalid_argument("append_row: size mismatch");
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    QMat transposed() const {
        QMat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    QMat operator*(const QMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matmul: shape mismatch");
        QMat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += (*this)(i, k) * o(k, j);
            }
        return r;
    }

    QVec apply(const QVec& v) const {
        if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
        QVec r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Rat s = 0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    bool operator==(const QMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && (*this)(p, c) == 0) ++p;
            if (p == rows_) continue;
            swap_rows(p, r);
            const Rat inv = Rat(1) / (*this)(r, c);
            for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || (*this)(i, c) == 0) continue;
                const Rat f = (*this)(i, c);
                for (std::size_t j = c; j < cols_; ++j)
                    (*this)(i, j) -= f * (*this)(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const {
        QMat m = *this;
        return m.rref().size();
    }

    /// Right kernel {x : Ax = 0}, returned as rows of a matrix in RREF.
    QMat kernel() const {
        QMat m = *this;
        const auto pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (auto c : pivots) is_pivot[c] = true;
        QMat k(cols_ - pivots.size(), cols_);
        std::size_t kr = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (is_pivot[c]) continue;
            k(kr, c) = 1;
            for (std::size_t i = 0; i < pivots.size(); ++i)
                k(kr, pivots[i]) = -m(i, c);
            ++kr;
        }
        k.rref();
        return k;
    }

    /// One solution of Ax = b, if any.
    std::optional<QVec> solve(const QVec& b) const {
        if (b.size() != rows_) throw std::invalid_argument("solve: size mismatch");
        QMat aug(rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_) = b[i];
        }
        const auto pivots = aug.rref();
        if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
        QVec x(cols_, Rat(0));
        for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, cols_);
        return x;
    }

    Rat det() const {
        if (rows_ != cols_) throw std::invalid_argument("det: not square");
        QMat m = *this;
        Rat d = 1;
        for (std::size_t c = 0; c < cols_; ++c) {
            std::size_t p = c;
            while (p < rows_ && m(p, c) == 0) ++p;
            if (p == rows_) return 0;
            if (p != c) {
                m.swap_rows(p, c);
                d = -d;
            }
            d *= m(c, c);
            const Rat inv = Rat(1) / m(c, c);
            for (std::size_t i = c + 1; i < rows_; ++i) {
                if (m(i, c) == 0) continue;
                const Rat f = m(i, c) * inv;
                for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
            }
        }
        return d;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    QVec data_;
};

// ---------------------------------------------------------------------------
// Integer matrices

class ZMat {
  public:
    ZMat() = default;
    ZMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ZMat identity(std::size_t n) {
        ZMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static ZMat from_rows(const std::vector<ZVec>& rows, std::size_t cols) {
        ZMat m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("from_rows: ragged input");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    ZVec row(std::size_t i) const {
        ZVec r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    ZMat operator*(const ZMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matmul: shape mismatch");
        ZMat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += (*this)(i, k) * o(k, j);
            }
        return r;
    }

    ZVec apply(const ZVec& v) const {
        if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
        ZVec r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Int s = 0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    bool operator==(const ZMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    QMat to_q() const {
        QMat q(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) q(i, j) = Rat((*this)(i, j));
        return q;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    ZVec data_;
};

struct SmithResult {
    ZMat u;  // unimodular, rows() x rows() of input
    ZMat d;  // diagonal, same shape as input, d1 | d2 | ...
    ZMat v;  // unimodular, cols() x cols() of input
};

/// Smith normal form: U * A * V = D with U, V unimodular and D diagonal with
/// nonnegative entries satisfying the divisibility chain.
inline SmithResult smith_normal_form(const ZMat& a) {
    const std::size_t m = a.rows(), n = a.cols();
    ZMat d = a;
    ZMat u = ZMat::identity(m);
    ZMat v = ZMat::identity(n);

    auto swap_rows = [&](std::size_t r1, std::size_t r2) {
        for (std::size_t j = 0; j < n; ++j) std::swap(d(r1, j), d(r2, j));
        for (std::size_t j = 0; j < m; ++j) std::swap(u(r1, j), u(r2, j));
    };
    auto swap_cols = [&](std::size_t c1, std::size_t c2) {
        for (std::size_t i = 0; i < m; ++i) std::swap(d(i, c1), d(i, c2));
        for (std::size_t i = 0; i < n; ++i) std::swap(v(i, c1), v(i, c2));
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t j = 0; j < n; ++j) d(dst, j) += f * d(src, j);
        for (std::size_t j = 0; j < m; ++j) u(dst, j) += f * u(src, j);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t i = 0; i < m; ++i) d(i, dst) += f * d(i, src);
        for (std::size_t i = 0; i < n; ++i) v(i, dst) += f * v(i, src);
    };
    auto negate_row = [&](std::size_t r) {
        for (std::size_t j = 0; j < n; ++j) d(r, j) = -d(r, j);
        for (std::size_t j = 0; j < m; ++j) u(r, j) = -u(r, j);
    };

    const std::size_t steps = std::min(m, n);
    for (std::size_t t = 0; t < steps; ++t) {
        // Locate a nonzero pivot of minimal absolute value in the trailing block.
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (d(i, j) == 0) continue;
                if (!found || abs(d(i, j)) < abs(d(pi, pj))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break;
        swap_rows(t, pi);
        swap_cols(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                const Int q = d(i, t) / d(t, t);
                add_row(i, t, -q);
                if (d(i, t) != 0) {  // remainder becomes the smaller pivot
                    swap_rows(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                const Int q = d(t, j) / d(t, t);
                add_col(j, t, -q);
                if (d(t, j) != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
            if (clean) {
                // Enforce divisibility of the remaining block by the pivot.
                for (std::size_t i = t + 1; i < m && clean; ++i)
                    for (std::size_t j = t + 1; j < n && clean; ++j)
                        if (d(i, j) % d(t, t) != 0) {
                            add_row(t, i, 1);
                            clean = false;
                        }
            }
        }
        if (d(t, t) < 0) negate_row(t);
    }
    return {std::move(u), std::move(d), std::move(v)};
}

/// Invariant factors of A (the nonzero diagonal of its Smith form).
inline std::vector<Int> invariant_factors(const ZMat& a) {
    const auto snf = smith_normal_form(a);
    std::vector<Int> f;
    for (std::size_t t = 0; t < std::min(a.rows(), a.cols()); ++t)
        if (snf.d(t, t) != 0) f.push_back(snf.d(t, t));
    return f;
}

/// Does Ax = b admit an integer solution? Returns one if so.
inline std::optional<ZVec> solve_integer(const ZMat& a, const ZVec& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_integer: size mismatch");
    const auto snf = smith_normal_form(a);
    const ZVec c = snf.u.apply(b);
    ZVec y(a.cols(), Int(0));
    const std::size_t steps = std::min(a.rows(), a.cols());
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i < steps && snf.d(i, i) != 0) {
            if (c[i] % snf.d(i, i) != 0) return std::nullopt;
            y[i] = c[i] / snf.d(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return snf.v.apply(y);
}

/// Row-style Hermite normal form (canonical basis of the row lattice).
/// Zero rows are dropped; pivots are positive and entries above a pivot are
/// reduced into [0, pivot).
inline ZMat hermite_normal_form(const ZMat& a) {
    std::vector<ZVec> rows;
    for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
    const std::size_t n = a.cols();
    std::vector<ZVec> result;
    std::size_t col = 0;
    while (col < n && !rows.empty()) {
        // Euclidean elimination in column `col`.
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
            }
            if (best == rows.size()) break;  // column clear
            std::swap(rows[0], rows[best]);
            bool reduced = true;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                const Int q = rows[i][col] / rows[0][col];
                for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[0][j];
                if (rows[i][col] != 0) reduced = false;
            }
            if (reduced) {
                if (rows[0][col] < 0)
                    for (auto& x : rows[0]) x = -x;
                result.push_back(rows[0]);
                rows.erase(rows.begin());
                break;
            }
        }
        ++col;
    }
    // Reduce entries above each pivot.
    for (std::size_t i = result.size(); i-- > 0;) {
        std::size_t p = 0;
        while (result[i][p] == 0) ++p;
        for (std::size_t k = 0; k < i; ++k) {
            Int q = result[k][p];
            // floor division by the positive pivot
            Int piv = result[i][p];
            Int f;
            if (q >= 0)
                f = q / piv;
            else
                f = -((-q + piv - 1) / piv);
            if (f != 0)
                for (std::size_t j = 0; j < n; ++j) result[k][j] -= f * result[i][j];
        }
    }
    return ZMat::from_rows(result, n);
}

/// Exact inverse of a unimodular integer matrix.
inline ZMat inverse_unimodular(const ZMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse_unimodular: not square");
    const std::size_t n = a.rows();
    QMat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = Rat(a(i, j));
        aug(i, n + i) = 1;
    }
    if (aug.rref().size() != n) throw std::invalid_argument("inverse_unimodular: singular");
    ZMat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rat& x = aug(i, n + j);
            if (boost::multiprecision::denominator(x) != 1)
                throw std::invalid_argument("inverse_unimodular: not unimodular");
            inv(i, j) = boost::multiprecision::numerator(x);
        }
    return inv;
}

/// Saturation of the row lattice of A in Z^n: all integer vectors of the
/// rational row span, as a canonical (HNF) basis.
inline ZMat saturation(const ZMat& a) {
    const auto snf = smith_normal_form(a);
    std::size_t rank = 0;
    for (std::size_t t = 0; t < std::min(a.rows(), a.cols()); ++t)
        if (snf.d(t, t) != 0) ++rank;
    // A = U^-1 D V^-1, so the row lattice is spanned by d_i * row_i(V^-1);
    // dropping the factors d_i yields the saturation.
    const ZMat vinv = inverse_unimodular(snf.v);
    std::vector<ZVec> rows;
    for (std::size_t i = 0; i < rank; ++i) {
        ZVec r(a.cols());
        for (std::size_t j = 0; j < a.cols(); ++j) r[j] = vinv(i, j);
        rows.push_back(std::move(r));
    }
    return hermite_normal_form(ZMat::from_rows(rows, a.cols()));
}

/// All integer points of the right kernel of A, as a canonical (HNF) row basis.
inline ZMat integer_kernel(const ZMat& a) {
    const QMat k = a.to_q().kernel();
    if (k.rows() == 0) return ZMat(0, a.cols());
    std::vector<ZVec> rows;
    for (std::size_t i = 0; i < k.rows(); ++i) rows.push_back(primitive(k.row(i)));
    return saturation(ZMat::from_rows(rows, a.cols()));
}

/// Intersection of the row lattices of A and B, as a canonical (HNF) basis.
inline ZMat lattice_intersection(const ZMat& a, const ZMat& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("lattice_intersection: ambient mismatch");
    const std::size_t n = a.cols();
    // Integer solutions (x, y) of x A = y B form the saturated left kernel of
    // the stacked matrix [A; -B]; their images x A generate the intersection.
    std::vector<ZVec> stacked;
    for (std::size_t i = 0; i < a.rows(); ++i) stacked.push_back(a.row(i));
    for (std::size_t i = 0; i < b.rows(); ++i) stacked.push_back(negated(b.row(i)));
    const ZMat s = ZMat::from_rows(stacked, n);
    ZMat st(n, s.rows());
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) st(j, i) = s(i, j);
    const ZMat zk = integer_kernel(st);
    std::vector<ZVec> gens;
    for (std::size_t i = 0; i < zk.rows(); ++i) {
        const ZVec xy = zk.row(i);
        ZVec img(n, Int(0));
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t j = 0; j < n; ++j) img[j] += xy[r] * a(r, j);
        gens.push_back(std::move(img));
    }
    if (gens.empty()) return ZMat(0, n);
    return hermite_normal_form(ZMat::from_rows(gens, n));
}

}  // namespace tvb
