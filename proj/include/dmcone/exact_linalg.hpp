#pragma once

// Small dense rational matrices and an exact nullspace via fraction-free
// (Bareiss) elimination.

#include "dmcone/error.hpp"
#include "dmcone/rational.hpp"

#include <boost/integer/common_factor.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dmcone {

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (v.size() != cols_) throw Error(ErrorCode::InvalidArgument, "dimension mismatch in matrix-vector product");
        std::vector<Rational> out(rows_, Rational(0));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (!(*this)(r, c).is_zero() && !v[c].is_zero()) out[r] += (*this)(r, c) * v[c];
        return out;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = r + 1; c < cols_; ++c)
                if ((*this)(r, c) != (*this)(c, r)) return false;
        return true;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

struct NullspaceResult {
    std::vector<std::vector<Rational>> basis; // one vector per free column, 1 at that column
    std::size_t rank = 0;
    std::size_t dimension() const noexcept { return basis.size(); }
};

/// Exact nullspace. Rows are cleared to integers, reduced to echelon form
/// with Bareiss steps (every division exact), then back-substituted once per
/// free column. The basis is the one read off the reduced row echelon form.
inline NullspaceResult nullspace(const RationalMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        BigInt lcm = 1;
        for (std::size_t c = 0; c < cols; ++c) lcm = boost::integer::lcm(lcm, m(r, c).denominator());
        for (std::size_t c = 0; c < cols; ++c) a[r][c] = m(r, c).numerator() * (lcm / m(r, c).denominator());
    }

    std::vector<std::size_t> pivot_cols;
    BigInt previous = 1;
    std::size_t prow = 0;
    for (std::size_t c = 0; c < cols && prow < rows; ++c) {
        std::size_t sel = prow;
        while (sel < rows && a[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[prow]);
        for (std::size_t r = prow + 1; r < rows; ++r) {
            for (std::size_t j = c + 1; j < cols; ++j)
                a[r][j] = (a[prow][c] * a[r][j] - a[r][c] * a[prow][j]) / previous;
            a[r][c] = 0;
        }
        previous = a[prow][c];
        pivot_cols.push_back(c);
        ++prow;
    }

    NullspaceResult result;
    result.rank = pivot_cols.size();
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;

    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t k = pivot_cols.size(); k-- > 0;) {
            std::size_t pc = pivot_cols[k];
            Rational acc(0);
            for (std::size_t j = pc + 1; j < cols; ++j)
                if (a[k][j] != 0 && !v[j].is_zero()) acc += Rational(a[k][j], 1) * v[j];
            v[pc] = -acc / Rational(a[k][pc], 1);
        }
        result.basis.push_back(std::move(v));
    }

    for (const auto& v : result.basis)
        for (const auto& x : m.apply(v))
            if (!x.is_zero()) throw std::logic_error("nullspace vector failed exact check");
    return result;
}

} // namespace dmcone
