#pragma once

// Exact polynomials of total degree at most two:
//   q(x) = constant + linear . x + x^T matrix x,  matrix symmetric.

#include "dmcone/error.hpp"
#include "dmcone/exact_linalg.hpp"
#include "dmcone/rational.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmcone {

class QuadraticForm {
public:
    QuadraticForm() = default;

    explicit QuadraticForm(std::size_t n_vars, Rational constant = 0)
        : constant_(std::move(constant)), linear_(n_vars, Rational(0)), matrix_(n_vars, n_vars) {}

    static QuadraticForm variable(std::size_t n_vars, std::size_t index) {
        QuadraticForm q(n_vars);
        q.linear_.at(index) = 1;
        return q;
    }

    std::size_t variable_count() const noexcept { return linear_.size(); }
    const Rational& constant() const noexcept { return constant_; }
    const std::vector<Rational>& linear() const noexcept { return linear_; }
    const RationalMatrix& matrix() const noexcept { return matrix_; }

    bool has_linear() const {
        for (const auto& l : linear_)
            if (!l.is_zero()) return true;
        return false;
    }
    bool has_quadratic() const { return !matrix_.is_zero(); }
    bool is_homogeneous_quadratic() const { return constant_.is_zero() && !has_linear(); }

    Rational evaluate(std::span<const Rational> x) const {
        if (x.size() != variable_count()) throw Error(ErrorCode::InvalidArgument, "wrong number of variables");
        Rational v = constant_;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!linear_[i].is_zero()) v += linear_[i] * x[i];
            for (std::size_t j = 0; j < x.size(); ++j)
                if (!matrix_(i, j).is_zero()) v += matrix_(i, j) * x[i] * x[j];
        }
        return v;
    }

    QuadraticForm& operator+=(const QuadraticForm& o) {
        check_compatible(o);
        constant_ += o.constant_;
        for (std::size_t i = 0; i < linear_.size(); ++i) linear_[i] += o.linear_[i];
        for (std::size_t i = 0; i < linear_.size(); ++i)
            for (std::size_t j = 0; j < linear_.size(); ++j) matrix_(i, j) += o.matrix_(i, j);
        return *this;
    }

    QuadraticForm& operator*=(const Rational& s) {
        constant_ *= s;
        for (auto& l : linear_) l *= s;
        for (std::size_t i = 0; i < linear_.size(); ++i)
            for (std::size_t j = 0; j < linear_.size(); ++j) matrix_(i, j) *= s;
        return *this;
    }

    friend QuadraticForm operator+(QuadraticForm a, const QuadraticForm& b) { return a += b; }
    friend QuadraticForm operator-(QuadraticForm a, const QuadraticForm& b) { return a += (-b); }
    friend QuadraticForm operator-(QuadraticForm a) { return a *= Rational(-1); }
    friend QuadraticForm operator*(QuadraticForm a, const Rational& s) { return a *= s; }
    friend QuadraticForm operator*(const Rational& s, QuadraticForm a) { return a *= s; }

    friend QuadraticForm operator+(QuadraticForm a, const Rational& s) { a.constant_ += s; return a; }
    friend QuadraticForm operator+(const Rational& s, QuadraticForm a) { a.constant_ += s; return a; }
    friend QuadraticForm operator-(QuadraticForm a, const Rational& s) { a.constant_ -= s; return a; }
    friend QuadraticForm operator-(const Rational& s, const QuadraticForm& a) { return (-a) + s; }

    /// Product; throws std::domain_error if the result would exceed degree two.
    friend QuadraticForm operator*(const QuadraticForm& a, const QuadraticForm& b) {
        a.check_compatible(b);
        const bool a_lin = a.has_linear(), b_lin = b.has_linear();
        const bool a_quad = a.has_quadratic(), b_quad = b.has_quadratic();
        if ((a_quad && (b_lin || b_quad)) || (b_quad && a_lin))
            throw std::domain_error("product exceeds total degree two");
        const std::size_t n = a.variable_count();
        QuadraticForm out(n, a.constant_ * b.constant_);
        for (std::size_t i = 0; i < n; ++i) out.linear_[i] = a.constant_ * b.linear_[i] + b.constant_ * a.linear_[i];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational v = a.constant_ * b.matrix_(i, j) + b.constant_ * a.matrix_(i, j);
                if (a_lin && b_lin) v += (a.linear_[i] * b.linear_[j] + a.linear_[j] * b.linear_[i]) / Rational(2);
                out.matrix_(i, j) = v;
            }
        return out;
    }

private:
    void check_compatible(const QuadraticForm& o) const {
        if (o.variable_count() != variable_count())
            throw Error(ErrorCode::InvalidArgument, "quadratic forms over different variable sets");
    }

    Rational constant_{0};
    std::vector<Rational> linear_;
    RationalMatrix matrix_;
};

} // namespace dmcone
