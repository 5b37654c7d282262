#pragma once

#include "dmcone/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace dmcone {

/// B(x, y) for x, y > 0.
inline long double beta_function(long double x, long double y) {
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

/// Gauss rule on [0,1] for the weight t^a (1-t)^b.
struct JacobiRule {
    double a = 0;
    double b = 0;
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(0.0));
        R sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// Golub–Welsch on the monic Jacobi recurrence; x = 2t - 1 carries the weight
/// (1-x)^b (1+x)^a.
inline JacobiRule gauss_jacobi(double a, double b, int order) {
    if (!(a > -1) || !(b > -1))
        throw Error(ErrorCode::ExponentOutOfRange, "Jacobi exponents must exceed -1, got a=" + std::to_string(a) + " b=" + std::to_string(b));
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "Jacobi rule order must be at least 1");
    using LD = long double;
    const LD al = b, be = a;  // (1-x)^alpha (1+x)^beta
    const int n = order;
    Eigen::Matrix<LD, Eigen::Dynamic, 1> diag(n), sub(n > 1 ? n - 1 : 1);
    for (int k = 0; k < n; ++k) {
        const LD s = 2 * k + al + be;
        diag(k) = k == 0 ? (be - al) / (al + be + 2) : (be * be - al * al) / (s * (s + 2));
    }
    for (int k = 1; k < n; ++k) {
        const LD s = 2 * k + al + be;
        LD bk;
        if (k == 1)
            bk = 4 * (1 + al) * (1 + be) / ((2 + al + be) * (2 + al + be) * (3 + al + be));
        else
            bk = 4 * k * (k + al) * (k + be) * (k + al + be) / (s * s * (s + 1) * (s - 1));
        sub(k - 1) = std::sqrt(bk);
    }
    JacobiRule rule{a, b, order, {}, {}};
    const LD mass = beta_function(static_cast<LD>(a) + 1, static_cast<LD>(b) + 1);
    if (n == 1) {
        rule.nodes = {static_cast<double>((diag(0) + 1) / 2)};
        rule.weights = {static_cast<double>(mass)};
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    for (int i = 0; i < n; ++i) {
        const LD v0 = solver.eigenvectors()(0, i);
        rule.nodes.push_back(static_cast<double>((solver.eigenvalues()(i) + 1) / 2));
        rule.weights.push_back(static_cast<double>(mass * v0 * v0));
    }
    return rule;
}

/// Process-wide cache; rules are immutable once built.
inline const JacobiRule& cached_jacobi(double a, double b, int order) {
    static std::map<std::tuple<double, double, int>, JacobiRule> cache;
    static std::mutex guard;
    std::lock_guard lock(guard);
    auto key = std::make_tuple(a, b, order);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(a, b, order)).first;
    return it->second;
}

struct QuadOptions {
    double rel_tol = 1e-14;
    double abs_tol = 0;
    int order = 16;
    int max_depth = 48;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error = 0;
    std::size_t evaluations = 0;
};

namespace detail {

enum class PieceKind { Both, Left, Right, Regular };

struct Piece {
    PieceKind kind;
    double lo, hi;
};

template <class F>
auto piece_value(double a, double b, const F& f, const Piece& p, int order, std::size_t& evals) {
    using R = decltype(f(0.0));
    R sum{};
    switch (p.kind) {
    case PieceKind::Both: {
        const auto& rule = cached_jacobi(a, b, order);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
        break;
    }
    case PieceKind::Left: {
        const auto& rule = cached_jacobi(a, 0, order);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = p.hi * rule.nodes[i];
            sum += rule.weights[i] * std::pow(1 - s, b) * f(s);
        }
        sum *= std::pow(p.hi, a + 1);
        break;
    }
    case PieceKind::Right: {
        const auto& rule = cached_jacobi(b, 0, order);
        const double len = 1 - p.lo;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = 1 - len * rule.nodes[i];
            sum += rule.weights[i] * std::pow(s, a) * f(s);
        }
        sum *= std::pow(len, b + 1);
        break;
    }
    case PieceKind::Regular: {
        const auto& rule = cached_jacobi(0, 0, order);
        const double len = p.hi - p.lo;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = p.lo + len * rule.nodes[i];
            sum += rule.weights[i] * std::pow(s, a) * std::pow(1 - s, b) * f(s);
        }
        sum *= len;
        break;
    }
    }
    evals += static_cast<std::size_t>(order);
    return sum;
}

inline std::pair<Piece, Piece> split(const Piece& p) {
    const double mid = (p.lo + p.hi) / 2;
    switch (p.kind) {
    case PieceKind::Both: return {{PieceKind::Left, 0, 0.5}, {PieceKind::Right, 0.5, 1}};
    case PieceKind::Left: return {{PieceKind::Left, 0, mid}, {PieceKind::Regular, mid, p.hi}};
    case PieceKind::Right: return {{PieceKind::Regular, p.lo, mid}, {PieceKind::Right, mid, 1}};
    case PieceKind::Regular: break;
    }
    return {{PieceKind::Regular, p.lo, mid}, {PieceKind::Regular, mid, p.hi}};
}

template <class F, class R>
bool refine(double a, double b, const F& f, const Piece& p, R whole, double tol, int depth, const QuadOptions& opt,
            QuadratureResult<R>& out) {
    auto [left, right] = split(p);
    R l = piece_value(a, b, f, left, opt.order, out.evaluations);
    R r = piece_value(a, b, f, right, opt.order, out.evaluations);
    const double diff = std::abs(l + r - whole);
    const double floor = 128 * std::numeric_limits<double>::epsilon() * (std::abs(l) + std::abs(r));
    const bool converged = diff <= std::max(tol, floor);
    if (converged || depth >= opt.max_depth) {
        out.value += l + r;
        out.error += diff;
        return converged;
    }
    bool ok = refine(a, b, f, left, l, tol / 2, depth + 1, opt, out);
    ok = refine(a, b, f, right, r, tol / 2, depth + 1, opt, out) && ok;
    return ok;
}

} // namespace detail

/// Adaptive integral of s^a (1-s)^b f(s) over [0,1]; the endpoint weights are
/// always carried by Jacobi rules, interior near-singularities by bisection.
template <class F>
auto integrate_jacobi_adaptive(double a, double b, F&& f, const QuadOptions& opt = {}) {
    using R = decltype(f(0.0));
    QuadratureResult<R> out;
    const detail::Piece whole{detail::PieceKind::Both, 0, 1};
    const R first = detail::piece_value(a, b, f, whole, opt.order, out.evaluations);
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(first));
    if (!detail::refine(a, b, f, whole, first, tol, 0, opt, out))
        throw Error(ErrorCode::ToleranceNotMet, "adaptive Jacobi quadrature did not reach tolerance (estimate " + std::to_string(out.error) + ")");
    return out;
}

} // namespace dmcone
