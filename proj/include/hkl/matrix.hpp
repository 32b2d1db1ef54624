#pragma once

// Dense matrices over a ring policy R providing zero(), one(), add, sub, neg,
// mul and is_zero. Fields additionally provide inv. FieldCtx (on element
// codes) and CycloRing (on CycloInt) both satisfy this.

#include "hkl/cyclotomic.hpp"
#include "hkl/finite_field.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace hkl {

template <class T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> data;  ///< row-major

    Mat() = default;
    Mat(std::size_t r, std::size_t c, T fill) : rows(r), cols(c), data(r * c, fill) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    bool operator==(const Mat&) const = default;
};

using MatFin = Mat<FieldCtx::Code>;

template <class R>
auto mat_zero(const R& ring, std::size_t r, std::size_t c) {
    return Mat<decltype(ring.zero())>(r, c, ring.zero());
}

template <class R>
auto mat_identity(const R& ring, std::size_t n) {
    auto m = mat_zero(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring.one();
    return m;
}

template <class R, class T>
Mat<T> mat_mul(const R& ring, const Mat<T>& a, const Mat<T>& b) {
    if (a.cols != b.rows) throw DomainError("mat_mul: dimension mismatch");
    Mat<T> c(a.rows, b.cols, ring.zero());
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const T& x = a(i, k);
            if (ring.is_zero(x)) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                if (ring.is_zero(b(k, j))) continue;
                c(i, j) = ring.add(c(i, j), ring.mul(x, b(k, j)));
            }
        }
    return c;
}

template <class R, class T>
Mat<T> mat_add(const R& ring, const Mat<T>& a, const Mat<T>& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DomainError("mat_add: dimension mismatch");
    Mat<T> c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = ring.add(a.data[i], b.data[i]);
    return c;
}

template <class R, class T>
Mat<T> mat_sub(const R& ring, const Mat<T>& a, const Mat<T>& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DomainError("mat_sub: dimension mismatch");
    Mat<T> c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = ring.sub(a.data[i], b.data[i]);
    return c;
}

template <class T>
Mat<T> mat_transpose(const Mat<T>& a) {
    Mat<T> t(a.cols, a.rows, T{});
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

template <class R, class T>
Mat<T> mat_pow(const R& ring, Mat<T> base, std::uint64_t e) {
    if (base.rows != base.cols) throw DomainError("mat_pow: matrix not square");
    Mat<T> r = mat_identity(ring, base.rows);
    while (e) {
        if (e & 1) r = mat_mul(ring, r, base);
        e >>= 1;
        if (e) base = mat_mul(ring, base, base);
    }
    return r;
}

/// Determinant by cofactor expansion along the first row, skipping zeros.
/// Intended for small or sparse matrices over rings without division.
template <class R, class T>
T det_expand(const R& ring, const Mat<T>& a) {
    if (a.rows != a.cols) throw DomainError("det: matrix not square");
    const std::size_t n = a.rows;
    if (n == 0) return ring.one();
    if (n == 1) return a(0, 0);
    T acc = ring.zero();
    for (std::size_t j = 0; j < n; ++j) {
        if (ring.is_zero(a(0, j))) continue;
        Mat<T> minor(n - 1, n - 1, ring.zero());
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t c = 0, cc = 0; c < n; ++c)
                if (c != j) minor(i - 1, cc++) = a(i, c);
        T term = ring.mul(a(0, j), det_expand(ring, minor));
        acc = (j % 2 == 0) ? ring.add(acc, term) : ring.sub(acc, term);
    }
    return acc;
}

/// Row echelon form in place over a field; returns the pivot columns.
template <class F, class T>
std::vector<std::size_t> row_reduce(const F& field, Mat<T>& a) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        std::size_t piv = r;
        while (piv < a.rows && field.is_zero(a(piv, c))) ++piv;
        if (piv == a.rows) continue;
        for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(r, j), a(piv, j));
        const T inv = field.inv(a(r, c));
        for (std::size_t j = 0; j < a.cols; ++j) a(r, j) = field.mul(a(r, j), inv);
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i == r || field.is_zero(a(i, c))) continue;
            const T f = a(i, c);
            for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = field.sub(a(i, j), field.mul(f, a(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F, class T>
std::size_t mat_rank(const F& field, Mat<T> a) {
    return row_reduce(field, a).size();
}

/// Determinant over a field by Gaussian elimination.
template <class F, class T>
T det_field(const F& field, Mat<T> a) {
    if (a.rows != a.cols) throw DomainError("det: matrix not square");
    T d = field.one();
    const std::size_t n = a.rows;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && field.is_zero(a(piv, c))) ++piv;
        if (piv == n) return field.zero();
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
            d = field.neg(d);
        }
        d = field.mul(d, a(c, c));
        const T inv = field.inv(a(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (field.is_zero(a(i, c))) continue;
            const T f = field.mul(a(i, c), inv);
            for (std::size_t j = c; j < n; ++j) a(i, j) = field.sub(a(i, j), field.mul(f, a(c, j)));
        }
    }
    return d;
}

template <class F, class T>
std::optional<Mat<T>> mat_inverse(const F& field, const Mat<T>& a) {
    if (a.rows != a.cols) throw DomainError("inverse: matrix not square");
    const std::size_t n = a.rows;
    Mat<T> aug(n, 2 * n, field.zero());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = field.one();
    }
    auto piv = row_reduce(field, aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Mat<T> inv(n, n, field.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

/// Basis of {x : a x = 0}, each vector of length a.cols.
template <class F, class T>
std::vector<std::vector<T>> nullspace(const F& field, Mat<T> a) {
    const auto piv = row_reduce(field, a);
    std::vector<bool> is_piv(a.cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t free = 0; free < a.cols; ++free) {
        if (is_piv[free]) continue;
        std::vector<T> v(a.cols, field.zero());
        v[free] = field.one();
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = field.neg(a(r, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Multiplicative order of an invertible matrix, or nullopt beyond `limit`.
template <class R, class T>
std::optional<std::uint64_t> matrix_order(const R& ring, const Mat<T>& a, std::uint64_t limit) {
    const Mat<T> id = mat_identity(ring, a.rows);
    Mat<T> cur = a;
    for (std::uint64_t e = 1; e <= limit; ++e) {
        if (cur == id) return e;
        cur = mat_mul(ring, cur, a);
    }
    return std::nullopt;
}

/// Matrix from integer entries, reduced into the prime field of ctx.
inline MatFin mat_from_ints(const FieldCtx& ctx, std::size_t n, std::size_t m, const std::vector<std::int64_t>& v) {
    if (v.size() != n * m) throw DomainError("mat_from_ints: wrong number of entries");
    MatFin a(n, m, 0);
    for (std::size_t i = 0; i < v.size(); ++i) a.data[i] = ctx.from_int(v[i]);
    return a;
}

}  // namespace hkl
