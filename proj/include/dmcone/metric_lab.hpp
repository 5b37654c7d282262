#pragma once

#include "dmcone/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dmcone::metric {

using Real = long double;
using Complex = std::complex<Real>;
using Point = std::vector<Complex>;
using HermitianMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

/// Kähler potential on an open chart of C^N.
///
/// `singular_distance` returns the distance from a point to the singular
/// locus (or the boundary of the chart); samples closer than `margin` are
/// inadmissible. `length_scale` caps the automatic step where the locus is
/// empty or far away.
struct PotentialModel {
    std::string name;
    int dim = 1;
    std::function<Real(const Point&)> potential;
    std::function<Real(const Point&)> singular_distance;
    std::string singular_locus;
    Real margin = 0;
    Real length_scale = 1;
    std::map<std::string, double> parameters;

    Real distance(const Point& z) const {
        return singular_distance ? singular_distance(z) : std::numeric_limits<Real>::infinity();
    }
    bool admissible(const Point& z) const { return static_cast<int>(z.size()) == dim && distance(z) > margin; }
    Real default_step(const Point& z) const { return std::min(distance(z), length_scale) / 16; }
};

namespace detail {

inline Real squared_norm(const Point& z) {
    Real s = 0;
    for (const auto& c : z) s += std::norm(c);
    return s;
}

// Fourth-order stencils on offsets -2..2.
inline constexpr std::array<Real, 5> first_weights{1.0L / 12, -8.0L / 12, 0, 8.0L / 12, -1.0L / 12};
inline constexpr std::array<Real, 5> second_weights{-1.0L / 12, 16.0L / 12, -30.0L / 12, 16.0L / 12, -1.0L / 12};

// Real coordinate k of C^N: x_a for k = 2a, y_a for k = 2a + 1.
inline void shift(Point& p, int k, Real amount) {
    auto& c = p[static_cast<std::size_t>(k / 2)];
    c += (k % 2 == 0) ? Complex(amount, 0) : Complex(0, amount);
}

template <class F>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> real_hessian(const F& f, const Point& z, Real h) {
    const int m = 2 * static_cast<int>(z.size());
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> hess(m, m);
    const Real center = f(z);
    for (int k = 0; k < m; ++k) {
        Real acc = second_weights[2] * center;
        for (int i = -2; i <= 2; ++i) {
            if (i == 0) continue;
            Point p = z;
            shift(p, k, i * h);
            acc += second_weights[static_cast<std::size_t>(i + 2)] * f(p);
        }
        hess(k, k) = acc / (h * h);
    }
    for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l) {
            Real acc = 0;
            for (int i = -2; i <= 2; ++i)
                for (int j = -2; j <= 2; ++j) {
                    if (i == 0 || j == 0) continue;
                    Point p = z;
                    shift(p, k, i * h);
                    shift(p, l, j * h);
                    acc += first_weights[static_cast<std::size_t>(i + 2)] * first_weights[static_cast<std::size_t>(j + 2)] * f(p);
                }
            hess(k, l) = hess(l, k) = acc / (h * h);
        }
    return hess;
}

template <class F>
HermitianMatrix levi_form_at_step(const F& f, const Point& z, Real h) {
    const auto hess = real_hessian(f, z, h);
    const int n = static_cast<int>(z.size());
    HermitianMatrix g(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Real re = hess(2 * a, 2 * b) + hess(2 * a + 1, 2 * b + 1);
            const Real im = hess(2 * a, 2 * b + 1) - hess(2 * a + 1, 2 * b);
            g(a, b) = Complex(re, im) / Real(4);
        }
    return (g + g.adjoint()) / Real(2);
}

/// d^2 f / dz_a dzbar_b, one Richardson level on top of the fourth-order stencil.
template <class F>
HermitianMatrix levi_form(const F& f, const Point& z, Real h) {
    HermitianMatrix coarse = levi_form_at_step(f, z, h);
    HermitianMatrix fine = levi_form_at_step(f, z, h / 2);
    HermitianMatrix g = (Real(16) * fine - coarse) / Real(15);
    return (g + g.adjoint()) / Real(2);
}

inline Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues(const HermitianMatrix& g) {
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(g, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline Real frobenius(const HermitianMatrix& m) { return m.norm(); }

inline void check_point(const PotentialModel& model, const Point& z, Real h) {
    if (static_cast<int>(z.size()) != model.dim)
        throw Error(ErrorCode::InvalidArgument, "point dimension does not match model " + model.name);
    if (!model.admissible(z)) throw Error(ErrorCode::OutOfDomain, "sample outside the admissible region of " + model.name);
    if (!(h > 0) || h >= model.distance(z) / 8)
        throw Error(ErrorCode::StepTooLarge, "step must be below 1/8 of the distance to the singular locus");
}

inline Real evaluate(const PotentialModel& model, const Point& z) {
    const Real v = model.potential(z);
    if (!std::isfinite(v)) throw Error(ErrorCode::OutOfDomain, "potential " + model.name + " is not finite at a stencil point");
    return v;
}

} // namespace detail

/// g_{a bbar} = d^2 phi / dz_a dzbar_b.
inline HermitianMatrix metric_at(const PotentialModel& model, const Point& z, Real h) {
    detail::check_point(model, z, h);
    auto g = detail::levi_form([&](const Point& p) { return detail::evaluate(model, p); }, z, h);
    const auto ev = detail::eigenvalues(g);
    if (!(ev.minCoeff() > 0)) throw Error(ErrorCode::NotPositiveDefinite, "metric of " + model.name + " is not positive definite");
    return g;
}

inline HermitianMatrix metric_at(const PotentialModel& model, const Point& z) { return metric_at(model, z, model.default_step(z)); }

inline Real log_det_metric(const PotentialModel& model, const Point& z, Real h) {
    const auto ev = detail::eigenvalues(metric_at(model, z, h));
    Real s = 0;
    for (int i = 0; i < ev.size(); ++i) s += std::log(ev(i));
    return s;
}

/// -d dbar log det g; the inner metric uses a quarter of the outer step.
inline HermitianMatrix ricci_at(const PotentialModel& model, const Point& z, Real h) {
    detail::check_point(model, z, h);
    const Real inner = h / 4;
    return -detail::levi_form([&](const Point& p) { return log_det_metric(model, p, inner); }, z, h);
}

inline HermitianMatrix ricci_at(const PotentialModel& model, const Point& z) { return ricci_at(model, z, model.default_step(z)); }

/// K = -g^{-1} d dbar log g in one complex variable.
inline Real gauss_curvature_1d(const PotentialModel& model, const Point& z, Real h) {
    if (model.dim != 1) throw Error(ErrorCode::InvalidArgument, "gauss_curvature_1d needs a one-dimensional model");
    if (std::abs(z.at(0)) == 0) throw Error(ErrorCode::OutOfDomain, "z = 0 is excluded");
    const Real g = metric_at(model, z, h)(0, 0).real();
    return ricci_at(model, z, h)(0, 0).real() / g;
}

inline Real gauss_curvature_1d(const PotentialModel& model, const Point& z) { return gauss_curvature_1d(model, z, model.default_step(z)); }

// Catalog -------------------------------------------------------------------

/// |z|^2 on C^N.
inline PotentialModel flat(int dim) {
    PotentialModel m;
    m.name = "flat";
    m.dim = dim;
    m.potential = [](const Point& z) { return detail::squared_norm(z); };
    m.singular_locus = "none";
    return m;
}

/// sum_a c_a |z_a|^2.
inline PotentialModel diagonal_flat(std::vector<Real> coefficients) {
    PotentialModel m;
    m.name = "diagonal-flat";
    m.dim = static_cast<int>(coefficients.size());
    m.potential = [c = std::move(coefficients)](const Point& z) {
        Real s = 0;
        for (std::size_t i = 0; i < z.size(); ++i) s += c[i] * std::norm(z[i]);
        return s;
    };
    m.singular_locus = "none";
    return m;
}

/// log(1 + |z|^2) on C^N.
inline PotentialModel fubini_study(int dim) {
    PotentialModel m;
    m.name = "fubini-study";
    m.dim = dim;
    m.potential = [](const Point& z) { return std::log1p(detail::squared_norm(z)); };
    m.singular_locus = "none";
    return m;
}

/// -log(-log|w|^2 - |z|^2) on the chart (z, w), w != 0.
inline PotentialModel cusp() {
    PotentialModel m;
    m.name = "cusp";
    m.dim = 2;
    m.potential = [](const Point& p) {
        const Real u = -std::log(std::norm(p[1])) - std::norm(p[0]);
        return u > 0 ? -std::log(u) : std::numeric_limits<Real>::quiet_NaN();
    };
    m.singular_distance = [](const Point& p) {
        const Real w = std::abs(p[1]), z = std::abs(p[0]);
        const Real u = -2 * std::log(w) - z * z;
        if (!(u > 0) || w == 0) return Real(0);
        return std::min(w, u / std::sqrt(4 / (w * w) + 4 * z * z));
    };
    m.singular_locus = "{w = 0} and the boundary -log|w|^2 = |z|^2";
    return m;
}

/// -log(-log|z|^2) on the punctured unit disk.
inline PotentialModel cusp_1d() {
    PotentialModel m;
    m.name = "cusp-1d";
    m.dim = 1;
    m.potential = [](const Point& p) {
        const Real u = -std::log(std::norm(p[0]));
        return u > 0 ? -std::log(u) : std::numeric_limits<Real>::quiet_NaN();
    };
    m.singular_distance = [](const Point& p) {
        const Real r = std::abs(p[0]);
        return std::min(r, 1 - r);
    };
    m.singular_locus = "{z = 0} and |z| = 1";
    return m;
}

/// sign * log(1 + sign |z|^{2 beta}) in one variable: sign = +1 spherical, -1 hyperbolic.
inline PotentialModel chsc(int sign, Real beta) {
    if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
    if (!(beta > 0 && beta <= 1)) throw Error(ErrorCode::InvalidArgument, "beta must lie in (0,1]");
    PotentialModel m;
    m.name = sign > 0 ? "chsc+" : "chsc-";
    m.dim = 1;
    m.parameters = {{"beta", static_cast<double>(beta)}, {"lambda", sign}};
    m.potential = [sign, beta](const Point& p) {
        const Real a = std::pow(std::norm(p[0]), beta);
        if (sign < 0 && a >= 1) return std::numeric_limits<Real>::quiet_NaN();
        return sign * std::log1p(sign * a);
    };
    m.singular_distance = [sign, beta](const Point& p) {
        const Real r = std::abs(p[0]);
        Real d = beta < 1 ? r : std::numeric_limits<Real>::infinity();
        if (sign < 0) d = std::min(d, 1 - r);
        return d;
    };
    m.singular_locus = beta < 1 ? "{z = 0}" : "none";
    if (sign < 0) m.singular_locus += ", |z| = 1";
    return m;
}

/// |z_1|^{2 beta} + |z_2|^2 + ... : flat cone with angle 2 pi beta along {z_1 = 0}.
inline PotentialModel conical_flat(int dim, Real beta) {
    PotentialModel m;
    m.name = "conical-flat";
    m.dim = dim;
    m.parameters = {{"beta", static_cast<double>(beta)}};
    m.potential = [beta](const Point& p) {
        Real s = std::pow(std::norm(p[0]), beta);
        for (std::size_t i = 1; i < p.size(); ++i) s += std::norm(p[i]);
        return s;
    };
    m.singular_distance = [beta](const Point& p) { return beta < 1 ? std::abs(p[0]) : std::numeric_limits<Real>::infinity(); };
    m.singular_locus = "{z_1 = 0}";
    return m;
}

/// lambda * log(1 + lambda r^2) built from a cone potential r^2.
inline PotentialModel lambda_modification(const PotentialModel& cone, int lambda) {
    if (lambda != 1 && lambda != -1) throw Error(ErrorCode::InvalidArgument, "lambda must be +1 or -1");
    PotentialModel m = cone;
    m.name = cone.name + (lambda > 0 ? "/lambda+1" : "/lambda-1");
    m.parameters["lambda"] = lambda;
    m.potential = [r2 = cone.potential, lambda](const Point& p) {
        const Real r = r2(p);
        if (lambda < 0 && r >= 1) return std::numeric_limits<Real>::quiet_NaN();
        return lambda * std::log1p(lambda * r);
    };
    return m;
}

/// Base of a Calabi cone: log H is the potential of the base metric.
struct ConeBase {
    std::string name;
    std::function<Real(Complex)> H;
    Real mu = 1;               // Ric(base) = mu * base
    std::optional<Real> beta;  // conical base: singular at z = 0
};

/// H = (1 + |z|^2)^2: twice the Fubini–Study metric on CP^1, Einstein constant 1.
inline ConeBase doubled_fubini_study_base() {
    return {"2fs", [](Complex z) { return std::pow(1 + std::norm(z), Real(2)); }, 1, std::nullopt};
}

/// H = 1 + |z|^{2 beta}: football metric, Einstein constant 2.
inline ConeBase football_base(Real beta) {
    return {"football", [beta](Complex z) { return 1 + std::pow(std::norm(z), beta); }, 2, beta};
}

inline PotentialModel base_potential(const ConeBase& base) {
    PotentialModel m;
    m.name = base.name;
    m.dim = 1;
    m.potential = [H = base.H](const Point& p) { return std::log(H(p[0])); };
    if (base.beta && *base.beta < 1) {
        m.singular_distance = [](const Point& p) { return std::abs(p[0]); };
        m.singular_locus = "{z = 0}";
    } else {
        m.singular_locus = "none";
    }
    return m;
}

/// r^2 = rho^{2 gamma}, rho^2 = |w|^2 H(z), on the chart (z, w).
inline PotentialModel calabi_cone(const ConeBase& base, Real gamma) {
    PotentialModel m;
    m.name = "cone/" + base.name;
    m.dim = 2;
    m.parameters = {{"gamma", static_cast<double>(gamma)}, {"mu", static_cast<double>(base.mu)}};
    if (base.beta) m.parameters["beta"] = static_cast<double>(*base.beta);
    m.potential = [H = base.H, gamma](const Point& p) { return std::pow(std::norm(p[1]) * H(p[0]), gamma); };
    const bool conical = base.beta && *base.beta < 1;
    m.singular_distance = [conical](const Point& p) {
        Real d = std::abs(p[1]);
        if (conical) d = std::min(d, std::abs(p[0]));
        return d;
    };
    m.singular_locus = conical ? "{w = 0} and {z = 0}" : "{w = 0}";
    return m;
}

struct CatalogEntry {
    std::string name;
    int dim;
    std::string description;
};

inline std::vector<CatalogEntry> catalog() {
    return {
        {"flat", 2, "|z|^2"},
        {"fubini-study", 2, "log(1+|z|^2)"},
        {"cone", 2, "(|w|^2 H(z))^gamma over 2*FS (or the football base with --beta)"},
        {"lambda", 2, "lambda*log(1+lambda*r^2) over |z1|^2+|z2|^2 (or |z1|^{2beta}+|z2|^2 with --beta)"},
        {"cusp", 2, "-log(-log|w|^2-|z|^2)"},
        {"chsc", 1, "lambda*log(1+lambda*|z|^{2beta})"},
        {"cusp-1d", 1, "-log(-log|z|^2)"},
        {"cone-to-cusp", 0, "deviation table of (1-rho^{2gamma})/gamma from -log rho^2"},
    };
}

// Reports ---------------------------------------------------------------------

struct ResidualStat {
    std::string name;
    double max_abs = 0;
    double max_rel = 0;
    std::size_t argmax = 0;
};

struct CurvatureReport {
    std::string check;
    std::vector<Point> samples;
    double eigen_min = std::numeric_limits<double>::infinity();
    double eigen_max = 0;
    std::vector<ResidualStat> residuals;
    double max_abs_residual = 0;
    double max_rel_residual = 0;
    double step_min = std::numeric_limits<double>::infinity();
    double step_max = 0;
    double tolerance = 0;
    bool pass = false;
    std::optional<double> constant;  // recorded curvature/Einstein constant where meaningful
    std::string convention = "g = ddbar(phi), Ric = -ddbar log det g, K = -g^{-1} ddbar log g";

    void record(std::size_t residual, std::size_t sample, double abs_value, double rel_value) {
        auto& r = residuals.at(residual);
        if (rel_value > r.max_rel) {
            r.max_rel = rel_value;
            r.argmax = sample;
        }
        r.max_abs = std::max(r.max_abs, abs_value);
    }
    void note_metric(const HermitianMatrix& g, Real h) {
        const auto ev = detail::eigenvalues(g);
        eigen_min = std::min(eigen_min, static_cast<double>(ev.minCoeff()));
        eigen_max = std::max(eigen_max, static_cast<double>(ev.maxCoeff()));
        step_min = std::min(step_min, static_cast<double>(h));
        step_max = std::max(step_max, static_cast<double>(h));
    }
    void finish() {
        max_abs_residual = max_rel_residual = 0;
        for (const auto& r : residuals) {
            max_abs_residual = std::max(max_abs_residual, r.max_abs);
            max_rel_residual = std::max(max_rel_residual, r.max_rel);
        }
        pass = max_rel_residual <= tolerance;
    }
};

inline constexpr double default_nested_tolerance = 1e-4;
inline constexpr double default_single_tolerance = 1e-6;

/// Deterministic samples: |z_i| uniform in [lo_i, hi_i], argument uniform.
inline std::vector<Point> annulus_samples(const std::vector<std::pair<Real, Real>>& radii, std::size_t count, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> out;
    for (std::size_t k = 0; k < count; ++k) {
        Point p;
        for (const auto& [lo, hi] : radii) {
            const Real r = lo + (hi - lo) * static_cast<Real>(unit(rng));
            const Real theta = 2 * std::acos(Real(-1)) * static_cast<Real>(unit(rng));
            p.push_back(std::polar(r, theta));
        }
        out.push_back(p);
    }
    return out;
}

/// Einstein check Ric = c g on the given samples.
inline CurvatureReport verify_einstein(const PotentialModel& model, Real constant, const std::vector<Point>& samples,
                                       double tol = default_nested_tolerance) {
    CurvatureReport rep;
    rep.check = "einstein:" + model.name;
    rep.samples = samples;
    rep.tolerance = tol;
    rep.constant = static_cast<double>(constant);
    rep.residuals = {{"Ric - c g"}};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Real h = model.default_step(samples[i]);
        const auto g = metric_at(model, samples[i], h);
        const auto ric = ricci_at(model, samples[i], h);
        rep.note_metric(g, h);
        const Real scale = detail::frobenius(constant * g);
        const Real abs = detail::frobenius(ric - constant * g);
        rep.record(0, i, static_cast<double>(abs), static_cast<double>(abs / (scale > 0 ? scale : 1)));
    }
    rep.finish();
    return rep;
}

/// Calabi cone over a base: checks Ric(omega_C) = pi^*(Ric(omega) - gamma (n+1) omega)
/// and reports Ricci-flatness; the verdict is the flatness residual, relative
/// to |pi^* Ric(omega)|.
inline CurvatureReport verify_cone_ricci(const ConeBase& base, Real gamma, const std::vector<Point>& samples,
                                         double tol = default_nested_tolerance) {
    const auto cone = calabi_cone(base, gamma);
    const auto base_model = base_potential(base);
    CurvatureReport rep;
    rep.check = "cone-ricci:" + base.name;
    rep.samples = samples;
    rep.tolerance = tol;
    rep.residuals = {{"Ric(omega_C)"}, {"Ric(omega_C) - pi*(Ric - gamma(n+1) omega)"}};
    const Real n = 1;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Point& p = samples[i];
        const Real h = cone.default_step(p);
        rep.note_metric(metric_at(cone, p, h), h);
        const auto ric = ricci_at(cone, p, h);
        const Point zb{p[0]};
        const Real hb = base_model.default_step(zb);
        const auto omega = metric_at(base_model, zb, hb);
        const auto base_ric = ricci_at(base_model, zb, hb);
        HermitianMatrix target = HermitianMatrix::Zero(2, 2);
        target(0, 0) = base_ric(0, 0) - gamma * (n + 1) * omega(0, 0);
        const Real scale = std::abs(base_ric(0, 0));
        const Real flat_abs = detail::frobenius(ric);
        const Real id_abs = detail::frobenius(ric - target);
        rep.record(0, i, static_cast<double>(flat_abs), static_cast<double>(flat_abs / scale));
        rep.record(1, i, static_cast<double>(id_abs), static_cast<double>(id_abs / scale));
    }
    rep.max_abs_residual = rep.residuals[0].max_abs;
    rep.max_rel_residual = rep.residuals[0].max_rel;
    rep.pass = rep.max_rel_residual <= tol;
    rep.constant = static_cast<double>(base.mu / (n + 1));
    return rep;
}

/// omega_{C,lambda} = lambda ddbar log(1 + lambda r^2): det ratio (1+lambda r^2)^{-(n+2)}
/// and Ric = lambda (n+2) g, with n + 1 the cone dimension.
inline CurvatureReport verify_lambda_modification(const PotentialModel& cone, int lambda, const std::vector<Point>& samples,
                                                  double tol = default_nested_tolerance) {
    const auto model = lambda_modification(cone, lambda);
    const Real n = cone.dim - 1;
    const Real einstein = lambda * (n + 2);
    for (const auto& p : samples)
        if (lambda < 0 && cone.potential(p) >= 1) throw Error(ErrorCode::OutOfDomain, "lambda = -1 requires r < 1 at every sample");
    CurvatureReport rep;
    rep.check = "lambda-modification:" + model.name;
    rep.samples = samples;
    rep.tolerance = tol;
    rep.constant = static_cast<double>(einstein);
    rep.residuals = {{"volume ratio"}, {"Ric - lambda(n+2) g"}};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Point& p = samples[i];
        Real h = model.default_step(p);
        if (lambda < 0) h = std::min(h, (1 - std::sqrt(cone.potential(p))) / 16);
        const auto g = metric_at(model, p, h);
        rep.note_metric(g, h);
        const Real ratio = std::exp(log_det_metric(model, p, h) - log_det_metric(cone, p, h));
        const Real expected = std::pow(1 + lambda * cone.potential(p), -(n + 2));
        rep.record(0, i, static_cast<double>(std::abs(ratio - expected)), static_cast<double>(std::abs(ratio / expected - 1)));
        const auto ric = ricci_at(model, p, h);
        const Real abs = detail::frobenius(ric - einstein * g);
        rep.record(1, i, static_cast<double>(abs), static_cast<double>(abs / detail::frobenius(einstein * g)));
    }
    rep.finish();
    return rep;
}

/// Gaussian curvature over samples: residual is the spread |K - K_ref| / |K_ref|,
/// with K_ref the mean (or a supplied reference value).
inline CurvatureReport verify_constant_curvature(const PotentialModel& model, const std::vector<Point>& samples,
                                                 double tol = default_single_tolerance, std::optional<Real> reference = std::nullopt) {
    CurvatureReport rep;
    rep.check = "constant-curvature:" + model.name;
    rep.samples = samples;
    rep.tolerance = tol;
    rep.residuals = {{"K - K_ref"}};
    std::vector<Real> ks;
    for (const auto& p : samples) {
        const Real h = model.default_step(p);
        rep.note_metric(metric_at(model, p, h), h);
        ks.push_back(gauss_curvature_1d(model, p, h));
    }
    Real ref = 0;
    if (reference) {
        ref = *reference;
    } else {
        for (Real k : ks) ref += k;
        ref /= static_cast<Real>(ks.size());
    }
    for (std::size_t i = 0; i < ks.size(); ++i)
        rep.record(0, i, static_cast<double>(std::abs(ks[i] - ref)), static_cast<double>(std::abs(ks[i] - ref) / std::abs(ref)));
    rep.constant = static_cast<double>(ref);
    rep.finish();
    return rep;
}

// Cone to cusp ------------------------------------------------------------------

struct ConeToCuspRow {
    double gamma;
    double max_deviation;
    double max_relative_deviation;  // divided by -log rho^2
    double argmax_rho;
};

struct ConeToCuspTable {
    std::vector<double> rhos;
    std::vector<ConeToCuspRow> rows;
    bool monotone = false;
    bool converges_linearly = false;  // deviation / gamma bounded by (log rho^2)^2 / 2 up to 1%
};

/// gamma^{-1}(1 - rho^{2 gamma}) against -log rho^2.
inline double cone_to_cusp_deviation(double rho, double gamma) {
    if (!(rho > 0 && rho < 1)) throw Error(ErrorCode::OutOfDomain, "rho must lie in (0,1)");
    if (!(gamma > 0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    const long double l = std::log(static_cast<long double>(rho) * rho);
    const long double approx = -std::expm1(static_cast<long double>(gamma) * l) / gamma;
    return static_cast<double>(std::abs(approx + l));
}

inline ConeToCuspTable verify_cone_to_cusp(const std::vector<double>& rhos, const std::vector<double>& gammas) {
    for (std::size_t i = 1; i < gammas.size(); ++i)
        if (!(gammas[i] < gammas[i - 1])) throw Error(ErrorCode::InvalidArgument, "gamma sequence must be decreasing");
    ConeToCuspTable t;
    t.rhos = rhos;
    t.monotone = true;
    t.converges_linearly = true;
    for (double g : gammas) {
        ConeToCuspRow row{g, 0, 0, 0};
        for (double rho : rhos) {
            const double d = cone_to_cusp_deviation(rho, g);
            const double l = -std::log(rho * rho);
            if (d > row.max_deviation) {
                row.max_deviation = d;
                row.argmax_rho = rho;
            }
            row.max_relative_deviation = std::max(row.max_relative_deviation, d / l);
            if (d > 1.01 * g * l * l / 2) t.converges_linearly = false;
        }
        if (!t.rows.empty() && !(row.max_deviation < t.rows.back().max_deviation)) t.monotone = false;
        t.rows.push_back(row);
    }
    return t;
}

inline std::vector<double> linspace(double a, double b, std::size_t count) {
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

} // namespace dmcone::metric
