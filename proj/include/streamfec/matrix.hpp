// Dense matrices over a finite field, Gaussian elimination with
// partial-determination reporting, and systematic MDS generators.
//
// The determination contract matters more than solvability here: the streaming
// decoders recover early source symbols even when later ones stay unknown, so
// elimination classifies every unknown individually. An unknown is
// "determined" when its value is the same in every solution of the system,
// i.e. it is a pivot whose row has no support on free columns.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "field.hpp"

namespace streamfec {

class Matrix {
public:
    Matrix() = default;
    Matrix(const Field& f, std::size_t rows, std::size_t cols)
        : f_(&f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(const Field& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return *f_; }

    std::uint64_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    const std::uint64_t* row(std::size_t r) const { return a_.data() + r * cols_; }
    std::uint64_t* row(std::size_t r) { return a_.data() + r * cols_; }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    Matrix mul(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix: shape mismatch");
        Matrix r(*f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                std::uint64_t v = at(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = f_->add(r.at(i, j), f_->mul(v, o.at(k, j)));
            }
        return r;
    }

    Matrix submatrix_cols(const std::vector<std::size_t>& cols) const {
        Matrix r(*f_, rows_, cols.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                r.at(i, j) = at(i, cols[j]);
        return r;
    }

private:
    const Field* f_ = nullptr;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint64_t> a_;
};

struct ErasureSolveReport {
    std::map<std::size_t, std::uint64_t> determined;  // unknown index -> value
    std::set<std::size_t> free;                       // undetermined unknowns
    bool consistent = true;

    bool is_determined(std::size_t i) const { return determined.count(i) != 0; }
    bool all_determined() const { return free.empty() && consistent; }
};

namespace detail {

// In-place row reduction of an augmented system [A | b]; returns pivot column
// per row (or npos). Shared by rank/solve/generator construction.
inline std::vector<std::size_t> rref(const Field& f, std::vector<std::vector<std::uint64_t>>& m) {
    const std::size_t npos = std::size_t(-1);
    std::vector<std::size_t> pivot_col;
    if (m.empty()) return pivot_col;
    std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t sel = npos;
        for (std::size_t i = r; i < m.size(); ++i)
            if (m[i][c] != 0) { sel = i; break; }
        if (sel == npos) continue;
        std::swap(m[r], m[sel]);
        std::uint64_t iv = f.inv(m[r][c]);
        if (iv != 1)
            for (std::size_t j = c; j < cols; ++j) m[r][j] = f.mul(m[r][j], iv);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            std::uint64_t factor = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] = f.sub(m[i][j], f.mul(factor, m[r][j]));
        }
        pivot_col.push_back(c);
        ++r;
    }
    return pivot_col;
}

}  // namespace detail

inline std::size_t rank(const Matrix& m) {
    std::vector<std::vector<std::uint64_t>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows[i].assign(m.row(i), m.row(i) + m.cols());
    return detail::rref(m.field(), rows).size();
}

inline ErasureSolveReport solve_erasures(const Matrix& coeffs,
                                         const std::vector<std::uint64_t>& rhs) {
    if (coeffs.rows() != rhs.size())
        throw std::invalid_argument("solve_erasures: rhs length mismatch");
    const Field& f = coeffs.field();
    std::size_t n = coeffs.cols();
    std::vector<std::vector<std::uint64_t>> m(coeffs.rows());
    for (std::size_t i = 0; i < coeffs.rows(); ++i) {
        m[i].assign(coeffs.row(i), coeffs.row(i) + n);
        m[i].push_back(rhs[i]);
    }
    std::vector<std::size_t> pivots = detail::rref(f, m);

    ErasureSolveReport rep;
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : pivots)
        if (p < n) is_pivot[p] = true;
    // inconsistent iff a pivot landed in the augmented column
    for (std::size_t p : pivots)
        if (p == n) rep.consistent = false;

    for (std::size_t r = 0; r < pivots.size(); ++r) {
        std::size_t c = pivots[r];
        if (c >= n) continue;
        bool fixed = true;
        for (std::size_t j = c + 1; j < n; ++j)
            if (m[r][j] != 0 && !is_pivot[j]) { fixed = false; break; }
        if (fixed) rep.determined[c] = m[r][n];
    }
    for (std::size_t j = 0; j < n; ++j)
        if (!rep.determined.count(j)) rep.free.insert(j);
    return rep;
}

// Systematic [I | P] generator of an (n,k) MDS code: row-reduce a k x n
// Vandermonde matrix on n distinct field points. Row operations preserve the
// code, and generalized Reed-Solomon codes are MDS.
inline Matrix rs_generator(std::size_t n, std::size_t k, const Field& f) {
    if (k > n) throw std::invalid_argument("rs_generator: k > n");
    if (n > f.size()) throw FieldError("rs_generator: n exceeds field size");
    if (k == 0) return Matrix(f, 0, n);
    std::vector<std::vector<std::uint64_t>> v(k, std::vector<std::uint64_t>(n));
    for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t x = f.from_int(std::int64_t(j));
        std::uint64_t p = 1;
        for (std::size_t i = 0; i < k; ++i) {
            v[i][j] = p;
            p = f.mul(p, x);
        }
    }
    std::vector<std::size_t> pivots = detail::rref(f, v);
    if (pivots.size() != k)
        throw std::logic_error("rs_generator: Vandermonde rank deficiency");
    for (std::size_t i = 0; i < k; ++i)
        if (pivots[i] != i)
            throw std::logic_error("rs_generator: leading block not invertible");
    Matrix g(f, k, n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) g.at(i, j) = v[i][j];
    return g;
}

inline bool is_mds(const Matrix& g) {
    std::size_t k = g.rows(), n = g.cols();
    if (k > n) return false;
    if (k == 0) return true;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (rank(g.submatrix_cols(idx)) != k) return false;
        // next k-combination of [0, n)
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return true;
}

}  // namespace streamfec
