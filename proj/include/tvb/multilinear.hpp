#pragma once

// Tensor, exterior, and symmetric products of vectors and subspaces with
// deterministic ordered bases: pure tensors indexed row-major, wedges by
// lexicographic k-subsets, symmetric products by lexicographic multisets.

#include "tvb/subspace.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace tvb {

inline std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Lexicographically ordered strictly increasing k-subsets of {0..n-1}.
inline std::vector<std::vector<int>> k_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Lexicographically ordered weakly increasing k-multisets of {0..n-1}.
inline std::vector<std::vector<int>> k_multisets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// v ⊗ w with row-major index (i,j) -> i*dim(w)+j.
inline QVec tensor_vec(const QVec& v, const QVec& w) {
    QVec r(v.size() * w.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) r[i * w.size() + j] = v[i] * w[j];
    return r;
}

/// v_1 ∧ ... ∧ v_k in the lex k-subset basis: coordinate at S is the minor
/// det(v_t[S_i]).
inline QVec wedge_vec(const std::vector<QVec>& vs) {
    const int k = static_cast<int>(vs.size());
    const int n = static_cast<int>(vs.empty() ? 0 : vs[0].size());
    const auto subsets = k_subsets(n, k);
    QVec r(subsets.size());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        QMat m(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m(i, j) = vs[i][subsets[s][j]];
        r[s] = m.det();
    }
    return r;
}

/// v_1 · ... · v_k in the lex k-multiset basis (coefficients of the product
/// of linear forms).
inline QVec sym_vec(const std::vector<QVec>& vs) {
    const int k = static_cast<int>(vs.size());
    const int n = static_cast<int>(vs.empty() ? 0 : vs[0].size());
    const auto multisets = k_multisets(n, k);
    // Multiply out iteratively: poly maps sorted multiset -> coefficient.
    std::map<std::vector<int>, Rat> poly;
    poly[{}] = 1;
    for (int t = 0; t < k; ++t) {
        std::map<std::vector<int>, Rat> next;
        for (const auto& [mono, c] : poly)
            for (int i = 0; i < n; ++i) {
                if (vs[t][i] == 0) continue;
                std::vector<int> m = mono;
                m.insert(std::lower_bound(m.begin(), m.end(), i), i);
                next[m] += c * vs[t][i];
            }
        poly = std::move(next);
    }
    QVec r(multisets.size());
    for (std::size_t s = 0; s < multisets.size(); ++s) {
        auto it = poly.find(multisets[s]);
        r[s] = it == poly.end() ? Rat(0) : it->second;
    }
    return r;
}

/// Image of A ⊗ B inside the tensor square of the ambient spaces.
inline Subspace tensor_subspace(const Subspace& a, const Subspace& b) {
    std::vector<QVec> gens;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            gens.push_back(tensor_vec(a.basis().row(i), b.basis().row(j)));
    return Subspace::span(gens, a.ambient_dim() * b.ambient_dim());
}

/// Span of w_1 ∧ ... ∧ w_k with w_t ranging over a basis of spaces[t].
inline Subspace wedge_product_subspace(const std::vector<Subspace>& spaces, std::size_t ambient_n) {
    const int k = static_cast<int>(spaces.size());
    const std::size_t amb = binomial(ambient_n, k);
    std::vector<QVec> gens;
    std::vector<int> choice(k, 0);
    auto rec = [&](auto&& self, int t, std::vector<QVec>& picked) -> void {
        if (t == k) {
            gens.push_back(wedge_vec(picked));
            return;
        }
        for (std::size_t i = 0; i < spaces[t].dim(); ++i) {
            picked.push_back(spaces[t].basis().row(i));
            self(self, t + 1, picked);
            picked.pop_back();
        }
    };
    std::vector<QVec> picked;
    rec(rec, 0, picked);
    return Subspace::span(gens, amb);
}

/// Span of w_1 · ... · w_k with w_t ranging over a basis of spaces[t].
inline Subspace sym_product_subspace(const std::vector<Subspace>& spaces, std::size_t ambient_n) {
    const int k = static_cast<int>(spaces.size());
    const std::size_t amb = binomial(ambient_n + k - 1, k);
    std::vector<QVec> gens;
    auto rec = [&](auto&& self, int t, std::vector<QVec>& picked) -> void {
        if (t == k) {
            gens.push_back(sym_vec(picked));
            return;
        }
        for (std::size_t i = 0; i < spaces[t].dim(); ++i) {
            picked.push_back(spaces[t].basis().row(i));
            self(self, t + 1, picked);
            picked.pop_back();
        }
    };
    std::vector<QVec> picked;
    rec(rec, 0, picked);
    return Subspace::span(gens, amb);
}

}  // namespace tvb
