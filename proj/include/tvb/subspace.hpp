#pragma once

// Canonical subspaces of Q^n. The basis is kept in reduced row echelon form,
// so equal subspaces compare equal syntactically.

#include "tvb/matrix.hpp"

#include <vector>

namespace tvb {

class Subspace {
  public:
    Subspace() = default;

    /// The zero subspace of Q^n.
    static Subspace zero(std::size_t ambient) { return Subspace(QMat(0, ambient), ambient); }

    /// All of Q^n.
    static Subspace full(std::size_t ambient) {
        return Subspace(QMat::identity(ambient), ambient);
    }

    /// Span of the given vectors.
    static Subspace span(const std::vector<QVec>& vectors, std::size_t ambient) {
        return Subspace(QMat::from_rows(vectors, ambient), ambient);
    }

    static Subspace span_z(const std::vector<ZVec>& vectors, std::size_t ambient) {
        std::vector<QVec> q;
        q.reserve(vectors.size());
        for (const auto& v : vectors) q.push_back(to_q(v));
        return span(q, ambient);
    }

    /// Row space of a matrix (rows canonicalized to RREF, zero rows dropped).
    explicit Subspace(QMat basis, std::size_t ambient) : ambient_(ambient) {
        if (basis.cols() != ambient) throw std::invalid_argument("Subspace: ambient mismatch");
        const auto pivots = basis.rref();
        basis_ = QMat(pivots.size(), ambient);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            for (std::size_t j = 0; j < ambient; ++j) basis_(i, j) = basis(i, j);
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const QMat& basis() const { return basis_; }
    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    bool contains(const QVec& v) const {
        QMat m = basis_;
        m.append_row(v);
        return m.rank() == dim();
    }

    bool contains(const Subspace& o) const {
        check_ambient(o);
        QMat m = basis_;
        for (std::size_t i = 0; i < o.dim(); ++i) m.append_row(o.basis_.row(i));
        return m.rank() == dim();
    }

    /// Sum of subspaces.
    Subspace join(const Subspace& o) const {
        check_ambient(o);
        QMat m = basis_;
        for (std::size_t i = 0; i < o.dim(); ++i) m.append_row(o.basis_.row(i));
        return Subspace(std::move(m), ambient_);
    }

    /// Intersection, via annihilators: (A cap B)^0 = A^0 + B^0.
    Subspace meet(const Subspace& o) const {
        check_ambient(o);
        return annihilator().join(o.annihilator()).annihilator();
    }

    /// Subspace of the dual (identified with Q^n) vanishing on this space.
    Subspace annihilator() const {
        return Subspace(basis_.kernel(), ambient_);
    }

    /// Deterministic direct complement of this subspace inside `whole`:
    /// greedily extend by rows of the echelon basis of `whole`.
    Subspace complement_in(const Subspace& whole) const {
        check_ambient(whole);
        if (!whole.contains(*this))
            throw std::invalid_argument("complement_in: not a subspace of the given space");
        QMat acc = basis_;
        std::vector<QVec> chosen;
        for (std::size_t i = 0; i < whole.dim(); ++i) {
            const QVec cand = whole.basis_.row(i);
            QMat trial = acc;
            trial.append_row(cand);
            if (trial.rank() > acc.rank()) {
                acc.append_row(cand);
                chosen.push_back(cand);
            }
        }
        return span(chosen, ambient_);
    }

  private:
    Subspace(QMat canonical_basis, std::size_t ambient, int)
        : ambient_(ambient), basis_(std::move(canonical_basis)) {}

    void check_ambient(const Subspace& o) const {
        if (ambient_ != o.ambient_)
            throw std::invalid_argument("Subspace: ambient dimension mismatch");
    }

    std::size_t ambient_ = 0;
    QMat basis_{0, 0};
};

}  // namespace tvb
