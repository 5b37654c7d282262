#pragma once

#include "dmcone/error.hpp"
#include "dmcone/jacobi.hpp"
#include "dmcone/metric_lab.hpp"
#include "dmcone/weights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmcone {

using cplx = std::complex<double>;

/// (orientation * (t - point))^{-exponent}.
struct PowerFactor {
    cplx point;
    double exponent;
    int orientation = 1;
};

namespace detail {

inline double distance_to_segment(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double s = std::clamp(std::real((p - a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    return std::abs(p - (a + s * d));
}

inline double distance_to_ray(cplx p, cplx q, cplx e) {
    const double s = std::max(0.0, std::real((p - q) * std::conj(e)));
    return std::abs(p - (q + s * e));
}

inline void check_exponent(double mu) {
    if (!(mu < 1)) throw Error(ErrorCode::NonIntegrable, "endpoint exponent " + std::to_string(mu) + " is not integrable");
}

// Consecutive samples of a continuous branch never differ by half a turn.
template <class F>
void assert_branch_continuity(const F& f) {
    constexpr int samples = 64;
    cplx previous = f(0.5 / samples);
    for (int i = 1; i < samples; ++i) {
        const cplx v = f((i + 0.5) / samples);
        if (std::abs(std::arg(v / previous)) > std::numbers::pi / 2)
            throw std::logic_error("integrand branch is discontinuous along the path");
        previous = v;
    }
}

} // namespace detail

/// Integral of prod (sigma (t - p))^{-mu} dt along the straight segment a -> b.
/// Each factor continues its principal value at the midpoint along the
/// segment; factors sitting at a or b are absorbed into the Jacobi weights.
inline QuadratureResult<cplx> integrate_segment(const std::vector<PowerFactor>& factors, cplx a, cplx b,
                                                const QuadOptions& opt = {}, double margin = 1e-9) {
    const double len = std::abs(b - a);
    if (len == 0) return {};
    const cplx mid = (a + b) / 2.0;
    double ea = 0, eb = 0;
    cplx constant = b - a;
    std::vector<PowerFactor> interior;
    for (const auto& f : factors) {
        const cplx ref = std::pow(static_cast<double>(f.orientation) * (mid - f.point), -f.exponent);
        if (std::abs(f.point - a) <= margin * len) {
            detail::check_exponent(f.exponent);
            ea -= f.exponent;
            constant *= ref * std::pow(2.0, -f.exponent);
        } else if (std::abs(f.point - b) <= margin * len) {
            detail::check_exponent(f.exponent);
            eb -= f.exponent;
            constant *= ref * std::pow(2.0, -f.exponent);
        } else {
            if (detail::distance_to_segment(f.point, a, b) <= margin * len)
                throw Error(ErrorCode::PunctureOnSegment, "a puncture lies on the integration segment");
            interior.push_back(f);
        }
    }
    auto g = [&](double s) {
        const cplx t = a + s * (b - a);
        cplx v = 1;
        for (const auto& f : interior) v *= std::pow((t - f.point) / (mid - f.point), -f.exponent);
        return v;
    };
    detail::assert_branch_continuity(g);
    for (const auto& f : interior) constant *= std::pow(static_cast<double>(f.orientation) * (mid - f.point), -f.exponent);
    auto r = integrate_jacobi_adaptive(ea, eb, g, opt);
    r.value *= constant;
    r.error *= std::abs(constant);
    return r;
}

/// Integral along the ray q + s e, s in [0, inf). Branches are continued from
/// the far end, where every factor is the principal power of sigma e s.
inline QuadratureResult<cplx> integrate_ray(const std::vector<PowerFactor>& factors, cplx q, cplx direction,
                                            const QuadOptions& opt = {}, double margin = 1e-9) {
    const cplx e = direction / std::abs(direction);
    double total = 0, ea = 0, scale = 1;
    for (const auto& f : factors) scale = std::max(scale, std::abs(f.point - q));
    cplx constant = e;
    std::vector<std::pair<cplx, double>> others;  // (w, mu)
    for (const auto& f : factors) {
        total += f.exponent;
        constant *= std::pow(static_cast<double>(f.orientation) * e, -f.exponent);
        if (std::abs(f.point - q) <= margin * scale) {
            detail::check_exponent(f.exponent);
            ea -= f.exponent;
        } else {
            if (detail::distance_to_ray(f.point, q, e) <= margin * scale)
                throw Error(ErrorCode::PunctureOnSegment, "a puncture lies on the integration ray");
            others.emplace_back((q - f.point) / e, f.exponent);
        }
    }
    const double eb = total - 2;
    if (!(eb > -1)) throw Error(ErrorCode::NonIntegrable, "integrand does not decay at infinity along the ray");
    auto g = [&](double u) {
        cplx v = 1;
        for (const auto& [w, mu] : others) v *= std::pow(u + w * (1 - u), -mu);
        return v;
    };
    detail::assert_branch_continuity(g);
    auto r = integrate_jacobi_adaptive(ea, eb, g, opt);
    r.value *= constant;
    r.error *= std::abs(constant);
    return r;
}

// Configurations ------------------------------------------------------------------

/// Weights mu_1..mu_{n+3} with z_j <-> mu_j, 0 <-> mu_{n+1}, 1 <-> mu_{n+2}, inf <-> mu_{n+3}.
struct ConfigurationPoint {
    std::vector<double> mu;
    std::vector<cplx> z;

    static ConfigurationPoint make(const WeightSystem& w, std::vector<cplx> z, double margin = 1e-6) {
        if (static_cast<int>(z.size()) != w.dimension())
            throw Error(ErrorCode::InvalidArgument, "need " + std::to_string(w.dimension()) + " moduli coordinates");
        ConfigurationPoint c;
        for (const auto& m : w.mu()) c.mu.push_back(m.to_double());
        c.z = std::move(z);
        auto pts = c.finite_points();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (std::abs(pts[i] - pts[j]) <= margin)
                    throw Error(ErrorCode::InvalidArgument, "punctures collide within the configuration margin");
        return c;
    }

    int n() const { return static_cast<int>(z.size()); }
    std::size_t points() const { return mu.size(); }

    std::vector<cplx> finite_points() const {
        std::vector<cplx> pts = z;
        pts.push_back(0);
        pts.push_back(1);
        return pts;
    }

    bool is_infinity(int index) const { return index == static_cast<int>(mu.size()); }

    cplx point(int index) const {
        if (index < 1 || index > static_cast<int>(mu.size())) throw Error(ErrorCode::InvalidArgument, "puncture index out of range");
        if (is_infinity(index)) throw Error(ErrorCode::InvalidArgument, "infinity has no finite position");
        return finite_points()[static_cast<std::size_t>(index - 1)];
    }

    /// The factors of Omega_z = t^{-mu_{n+1}} (t-1)^{-mu_{n+2}} prod (t - z_j)^{-mu_j} dt.
    std::vector<PowerFactor> factors() const {
        std::vector<PowerFactor> out;
        auto pts = finite_points();
        for (std::size_t i = 0; i < pts.size(); ++i) out.push_back({pts[i], mu[i], 1});
        return out;
    }
};

/// Period of Omega_z between punctures `from` and `to` (1-based; the last index
/// is infinity, reached along `ray_direction`).
inline QuadratureResult<cplx> period(const ConfigurationPoint& cfg, int from, int to, cplx ray_direction = {0, 1},
                                     const QuadOptions& opt = {}) {
    if (from == to) throw Error(ErrorCode::InvalidArgument, "segment endpoints must differ");
    if (cfg.is_infinity(from)) {
        auto r = period(cfg, to, from, ray_direction, opt);
        r.value = -r.value;
        return r;
    }
    if (cfg.is_infinity(to)) return integrate_ray(cfg.factors(), cfg.point(from), ray_direction, opt);
    return integrate_segment(cfg.factors(), cfg.point(from), cfg.point(to), opt);
}

/// True when [0,1] and [z,inf] bound the same twisted cycle (mu_0 + mu_1 = 1).
inline bool disjoint_pair_degenerate(const ConfigurationPoint& cfg) { return std::abs(cfg.mu[1] + cfg.mu[2] - 1) < 1e-12; }

/// The classical pair for n = 1: P1 over [0,1], P2 along z -> z + i inf; when
/// that pair is degenerate P2 runs over [1,z] instead.
inline std::pair<cplx, cplx> classical_periods(const ConfigurationPoint& cfg, const QuadOptions& opt = {}) {
    if (cfg.n() != 1) throw Error(ErrorCode::InvalidArgument, "the classical period pair needs n = 1");
    const cplx p1 = period(cfg, 2, 3, {0, 1}, opt).value;
    if (disjoint_pair_degenerate(cfg)) return {p1, period(cfg, 3, 1, {0, 1}, opt).value};
    return {p1, period(cfg, 1, 4, {0, 1}, opt).value};
}

// Area oracle ---------------------------------------------------------------------

/// Density prod |t - p|^{-2 mu} (1 + |t|^2)^{-kappa} on C.
struct AreaDensity {
    std::vector<std::pair<cplx, double>> finite;
    double kappa = 0;

    static AreaDensity of(const ConfigurationPoint& cfg) {
        AreaDensity d;
        auto pts = cfg.finite_points();
        for (std::size_t i = 0; i < pts.size(); ++i) d.finite.emplace_back(pts[i], cfg.mu[i]);
        return d;
    }

    /// Exponent mu_inf with density ~ |t|^{2 mu_inf - 4} at infinity.
    double infinity_exponent() const {
        double s = kappa;
        for (const auto& [p, m] : finite) s += m;
        return 2 - s;
    }

    double log_density(cplx t) const {
        double l = 0;
        for (const auto& [p, m] : finite) l -= m * std::log(std::norm(t - p));
        if (kappa != 0) l -= kappa * std::log1p(std::norm(t));
        return l;
    }
};

struct AreaOptions {
    double rel_tol = 1e-12;
    int order = 10;
    std::size_t max_cells = 200000;
};

struct AreaResult {
    double area = 0;
    double error = 0;
    std::size_t cells = 0;
    std::size_t evaluations = 0;
};

namespace detail {

struct PolarCell {
    double r0, r1, t0, t1;
    int singular = -1;  // index into the puncture list, -1 if none
    int corner = 0;     // bit 0: r side (0 = r0), bit 1: theta side (0 = t0)
    double value = 0;
    double error = 0;
};

struct PolarIntegrator {
    const AreaDensity& density;
    cplx center;
    std::vector<std::pair<double, double>> polar;  // (r, theta) per puncture
    int order;
    std::size_t evaluations = 0;

    double integrand(double r, double theta) {
        ++evaluations;
        const cplx t = center + std::polar(r, theta);
        return std::exp(density.log_density(t)) * r;
    }

    double log_integrand(double r, double theta) {
        ++evaluations;
        const cplx t = center + std::polar(r, theta);
        return density.log_density(t) + std::log(r);
    }

    double regular(const PolarCell& c, int m) {
        const auto& rule = cached_jacobi(0, 0, m);
        double sum = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double r = c.r0 + (c.r1 - c.r0) * rule.nodes[static_cast<std::size_t>(i)];
                const double th = c.t0 + (c.t1 - c.t0) * rule.nodes[static_cast<std::size_t>(j)];
                sum += rule.weights[static_cast<std::size_t>(i)] * rule.weights[static_cast<std::size_t>(j)] * integrand(r, th);
            }
        return sum * (c.r1 - c.r0) * (c.t1 - c.t0);
    }

    // Duffy split of the unit square at the singular corner (0,0):
    // x = u, y = u v and y = u, x = u v; u carries the weight u^{1 - 2 mu}.
    double singular(const PolarCell& c, int m) {
        const double mu = density.finite[static_cast<std::size_t>(c.singular)].second;
        const auto& ju = cached_jacobi(1 - 2 * mu, 0, m);
        const auto& gv = cached_jacobi(0, 0, m);
        const double rc = (c.corner & 1) ? c.r1 : c.r0, ro = (c.corner & 1) ? c.r0 : c.r1;
        const double tc = (c.corner & 2) ? c.t1 : c.t0, to = (c.corner & 2) ? c.t0 : c.t1;
        double sum = 0;
        for (int tri = 0; tri < 2; ++tri)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const double u = ju.nodes[static_cast<std::size_t>(i)];
                    const double v = gv.nodes[static_cast<std::size_t>(j)];
                    const double x = tri == 0 ? u : u * v, y = tri == 0 ? u * v : u;
                    const double r = rc + (ro - rc) * x, th = tc + (to - tc) * y;
                    const double l = log_integrand(r, th) + 2 * mu * std::log(u);
                    sum += ju.weights[static_cast<std::size_t>(i)] * gv.weights[static_cast<std::size_t>(j)] * std::exp(l);
                }
        return sum * std::abs((ro - rc) * (to - tc));
    }

    void evaluate(PolarCell& c) {
        const int lo = std::max(2, order - 3);
        if (c.singular >= 0) {
            // Singular cells are self-similar under refinement, so their own
            // rule must already be converged.
            const int high = 2 * order + 4;
            c.value = singular(c, high);
            c.error = std::abs(c.value - singular(c, high - 4));
        } else {
            c.value = regular(c, order);
            c.error = std::abs(c.value - regular(c, lo));
        }
    }

    std::vector<int> singular_corners(const PolarCell& c) const {
        std::vector<int> out;
        for (std::size_t k = 0; k < polar.size(); ++k) {
            const auto [r, th] = polar[k];
            for (int corner = 0; corner < 4; ++corner) {
                const double rc = (corner & 1) ? c.r1 : c.r0, tc = (corner & 2) ? c.t1 : c.t0;
                if (std::abs(r - rc) <= 1e-13 * (1 + r) && std::abs(std::remainder(th - tc, 2 * std::numbers::pi)) <= 1e-13)
                    out.push_back(static_cast<int>(k) * 4 + corner);
            }
        }
        return out;
    }
};

} // namespace detail

/// Area 2 * int |f|^2 dx dy = int i f dt ^ conj(f dt) for the density f.
/// Disk |t - c| <= R: polar cells with every puncture at a cell corner,
/// Duffy-Jacobi at singular corners, global adaptive quadrisection. Exterior:
/// rho = R / |t - c| with the decay exponent in a Jacobi weight, trapezoid in theta.
inline AreaResult area_integral(const AreaDensity& density, const AreaOptions& opt = {}) {
    for (const auto& [p, m] : density.finite)
        if (!(m < 1)) throw Error(ErrorCode::NonIntegrable, "puncture exponent " + std::to_string(m) + " is not integrable");
    const double mu_inf = density.infinity_exponent();
    if (!(mu_inf < 1)) throw Error(ErrorCode::NonIntegrable, "density does not decay fast enough at infinity");

    cplx mean = 0;
    for (const auto& [p, m] : density.finite) mean += p;
    mean /= static_cast<double>(std::max<std::size_t>(1, density.finite.size()));
    double spread = 0;
    for (const auto& [p, m] : density.finite) spread = std::max(spread, std::abs(p - mean));
    if (spread == 0) spread = 1;
    // Polar centre away from the punctures, with well separated radii and angles.
    auto score = [&](cplx cand) {
        double sc = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < density.finite.size(); ++i) {
            const cplx pi = density.finite[i].first - cand;
            sc = std::min(sc, std::abs(pi) / spread);
            for (std::size_t j = i + 1; j < density.finite.size(); ++j) {
                const cplx pj = density.finite[j].first - cand;
                sc = std::min(sc, 4 * std::abs(std::abs(pi) - std::abs(pj)) / spread);
                sc = std::min(sc, std::abs(std::remainder(std::arg(pi) - std::arg(pj), 2 * std::numbers::pi)));
            }
        }
        return sc;
    };
    cplx center = mean;
    double best = score(mean);
    for (int ring = 1; ring <= 3; ++ring)
        for (int k = 0; k < 16; ++k) {
            const cplx cand = mean + 0.2 * ring * spread * std::polar(1.0, 0.3 + 2 * std::numbers::pi * k / 16);
            const double sc = score(cand);
            if (sc > best * 1.25) {
                best = sc;
                center = cand;
            }
        }
    double rmax = 0;
    for (const auto& [p, m] : density.finite) rmax = std::max(rmax, std::abs(p - center));
    const double R = 4 * std::max(rmax, 0.25);

    detail::PolarIntegrator integ{density, center, {}, opt.order};
    std::vector<double> rs{0, R}, ts;
    for (const auto& [p, m] : density.finite) {
        const double r = std::abs(p - center), th = std::arg(p - center);
        integ.polar.emplace_back(r, th);
        rs.push_back(r);
        ts.push_back(th);
    }
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    if (ts.empty()) ts.push_back(0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<double> tb;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double a = ts[i], b = i + 1 < ts.size() ? ts[i + 1] : ts[0] + 2 * std::numbers::pi;
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / (std::numbers::pi / 4))));
        for (int k = 0; k < pieces; ++k) tb.push_back(a + (b - a) * k / pieces);
    }
    tb.push_back(ts[0] + 2 * std::numbers::pi);

    std::vector<detail::PolarCell> cells;
    auto push = [&](detail::PolarCell c) {
        auto corners = integ.singular_corners(c);
        if (corners.size() > 1) {
            if (c.r1 - c.r0 < 1e-9 * R || c.t1 - c.t0 < 1e-9)
                throw Error(ErrorCode::ToleranceNotMet, "area quadrature cells degenerated near a puncture");
            // Split until each cell carries at most one singular corner.
            const double rm = (c.r0 + c.r1) / 2, tm = (c.t0 + c.t1) / 2;
            return std::vector<detail::PolarCell>{{c.r0, rm, c.t0, tm}, {rm, c.r1, c.t0, tm}, {c.r0, rm, tm, c.t1}, {rm, c.r1, tm, c.t1}};
        }
        if (corners.size() == 1) {
            c.singular = corners[0] / 4;
            c.corner = corners[0] % 4;
        }
        integ.evaluate(c);
        cells.push_back(c);
        return std::vector<detail::PolarCell>{};
    };
    std::vector<detail::PolarCell> pending;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i)
        for (std::size_t j = 0; j + 1 < tb.size(); ++j) pending.push_back({rs[i], rs[i + 1], tb[j], tb[j + 1]});
    while (!pending.empty()) {
        auto c = pending.back();
        pending.pop_back();
        for (auto& child : push(c)) pending.push_back(child);
    }

    // Exterior.
    auto exterior = [&](int m, int nt) {
        const auto& rule = cached_jacobi(1 - 2 * mu_inf, 0, m);
        double sum = 0;
        for (int j = 0; j < nt; ++j) {
            const double th = 2 * std::numbers::pi * j / nt;
            for (int i = 0; i < m; ++i) {
                const double rho = rule.nodes[static_cast<std::size_t>(i)];
                const cplx t = center + std::polar(R / rho, th);
                const double l = density.log_density(t) + 2 * std::log(R) + (2 * mu_inf - 4) * std::log(rho);
                sum += rule.weights[static_cast<std::size_t>(i)] * std::exp(l);
            }
        }
        integ.evaluations += static_cast<std::size_t>(m * nt);
        return sum * 2 * std::numbers::pi / nt;
    };
    const double ext = exterior(40, 128);
    const double ext_err = std::abs(ext - exterior(24, 64));

    auto total = [&]() {
        double v = ext, e = ext_err;
        for (const auto& c : cells) {
            v += c.value;
            e += c.error;
        }
        return std::pair{v, e};
    };
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> queue;
    for (std::size_t i = 0; i < cells.size(); ++i) queue.emplace(cells[i].error, i);
    std::vector<bool> active(cells.size(), true);
    auto [value, error] = total();
    while (error > opt.rel_tol * std::abs(value)) {
        if (cells.size() > opt.max_cells)
            throw Error(ErrorCode::ToleranceNotMet, "area quadrature stopped at " + std::to_string(cells.size()) +
                                                        " cells with relative error " + std::to_string(error / value));
        const auto [err, idx] = queue.top();
        queue.pop();
        const auto parent = cells[idx];
        active[idx] = false;
        value -= parent.value;
        error -= parent.error;
        const double rm = (parent.r0 + parent.r1) / 2, tm = (parent.t0 + parent.t1) / 2;
        std::vector<detail::PolarCell> kids{{parent.r0, rm, parent.t0, tm}, {rm, parent.r1, parent.t0, tm},
                                            {parent.r0, rm, tm, parent.t1}, {rm, parent.r1, tm, parent.t1}};
        const std::size_t before = cells.size();
        while (!kids.empty()) {
            auto k = kids.back();
            kids.pop_back();
            for (auto& child : push(k)) kids.push_back(child);
        }
        {
            for (std::size_t i = before; i < cells.size(); ++i) {
                active.push_back(true);
                queue.emplace(cells[i].error, i);
                value += cells[i].value;
                error += cells[i].error;
            }
        }
        if (error < 0) error = 0;
    }
    AreaResult out;
    out.area = ext;
    out.error = ext_err;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (active[i]) {
            out.area += cells[i].value;
            out.error += cells[i].error;
            ++out.cells;
        }
    out.area *= 2;
    out.error *= 2;
    out.evaluations = integ.evaluations;
    return out;
}

enum class AreaMethod { Periods, AreaOracle };

inline std::string to_string(AreaMethod m) { return m == AreaMethod::Periods ? "periods" : "area-oracle"; }

struct WPValue {
    double area = 0;
    double potential = 0;
    double error = 0;
    AreaMethod method = AreaMethod::AreaOracle;
};

/// Hermitian form A = a |P1|^2 + b |P2|^2 + 2 Re(c P1 conj(P2)) in the classical pair.
struct HermitianFit {
    double a = 0, b = 0;
    cplx c = 0;
    double fit_residual = 0;  // max relative residual on the fitting samples

    double area(cplx p1, cplx p2) const { return a * std::norm(p1) + b * std::norm(p2) + 2 * std::real(c * p1 * std::conj(p2)); }
    double determinant() const { return a * b - std::norm(c); }
};

inline WPValue wp_area(const ConfigurationPoint& cfg, const AreaOptions& opt = {}) {
    auto r = area_integral(AreaDensity::of(cfg), opt);
    return {r.area, -std::log(r.area), r.error, AreaMethod::AreaOracle};
}

inline WPValue wp_area(const ConfigurationPoint& cfg, const HermitianFit& fit, const QuadOptions& opt = {}) {
    auto [p1, p2] = classical_periods(cfg, opt);
    const double area = fit.area(p1, p2);
    if (!(area > 0)) throw Error(ErrorCode::ToleranceNotMet, "hermitian fit produced a non-positive area");
    return {area, -std::log(area), 0, AreaMethod::Periods};
}

/// Least-squares fit of the hermitian coefficients against the area oracle.
inline HermitianFit fit_hermitian_form(const WeightSystem& w, const std::vector<cplx>& zs, const AreaOptions& opt = {}) {
    if (w.dimension() != 1) throw Error(ErrorCode::InvalidArgument, "hermitian fit needs n = 1");
    if (zs.size() < 4) throw Error(ErrorCode::InvalidArgument, "need at least four fitting samples");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(zs.size()), 4);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(zs.size()));
    std::vector<std::pair<cplx, cplx>> ps;
    for (std::size_t k = 0; k < zs.size(); ++k) {
        auto cfg = ConfigurationPoint::make(w, {zs[k]});
        auto [p1, p2] = classical_periods(cfg);
        ps.emplace_back(p1, p2);
        const double area = wp_area(cfg, opt).area;
        const cplx cross = p1 * std::conj(p2);
        const auto row = static_cast<Eigen::Index>(k);
        // Each row divided by the area: relative least squares.
        m(row, 0) = std::norm(p1) / area;
        m(row, 1) = std::norm(p2) / area;
        m(row, 2) = 2 * cross.real() / area;
        m(row, 3) = -2 * cross.imag() / area;
        rhs(row) = 1;
    }
    Eigen::VectorXd x = m.colPivHouseholderQr().solve(rhs);
    HermitianFit fit{x(0), x(1), {x(2), x(3)}, 0};
    fit.fit_residual = (m * x - rhs).cwiseAbs().maxCoeff();
    return fit;
}

// Curvature -------------------------------------------------------------------------

/// Gaussian curvature K = -g^{-1} ddbar log g of g = ddbar psi from psi values
/// on a lattice of spacing h around z; fourth-order Laplacians, ddbar = Laplacian / 4.
inline double lattice_curvature(const std::function<double(cplx)>& psi, cplx z, double h) {
    std::map<std::pair<int, int>, double> cache;
    auto value = [&](int i, int j) {
        auto key = std::make_pair(i, j);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const double v = psi(z + cplx(i * h, j * h));
        cache.emplace(key, v);
        return v;
    };
    static constexpr int off[5] = {-2, -1, 0, 1, 2};
    static constexpr double w2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    auto metric = [&](int i, int j) {
        double lap = 0;
        for (int k = 0; k < 5; ++k) lap += w2[k] * (value(i + off[k], j) + value(i, j + off[k]));
        return lap / (4 * h * h);
    };
    double lap_log = 0;
    for (int k = 0; k < 5; ++k) lap_log += w2[k] * (std::log(metric(off[k], 0)) + std::log(metric(0, off[k])));
    const double g = metric(0, 0);
    if (!(g > 0)) throw Error(ErrorCode::NotPositiveDefinite, "potential is not strictly plurisubharmonic at the sample");
    return -(lap_log / (4 * h * h)) / g;
}

struct WPCurvatureOptions {
    AreaMethod method = AreaMethod::Periods;
    double step = 0;            // 0: distance to the nearest puncture / 16
    double tolerance = 1e-3;    // relative spread
    AreaOptions area{};
    QuadOptions quad{};
    std::optional<HermitianFit> fit;  // required for the periods method
    std::function<AreaDensity(const ConfigurationPoint&)> density;  // area-oracle override (controls)
};

struct WPCurvatureReport {
    metric::CurvatureReport report;
    std::vector<double> curvature;          // Richardson of steps h, h/2
    std::vector<double> refined_curvature;  // Richardson of steps h/2, h/4
    double mean = 0;
    double refined_mean = 0;
    double spread = 0;          // max |K - mean| / |mean|
    double refinement_shift = 0;  // |refined_mean - mean| / |mean|
    bool negative = false;
};

inline double puncture_distance(cplx z) { return std::min({std::abs(z), std::abs(z - 1.0), std::abs(z.imag())}); }

/// Curvature of -i ddbar log(area) on a grid of the upper half plane (n = 1).
inline WPCurvatureReport wp_curvature_check(const WeightSystem& w, const std::vector<cplx>& grid, WPCurvatureOptions opt = {}) {
    if (w.dimension() != 1) throw Error(ErrorCode::InvalidArgument, "curvature checks are available for n = 1 only");
    if (opt.method == AreaMethod::Periods && !opt.fit) throw Error(ErrorCode::InvalidArgument, "periods method needs a hermitian fit");
    std::function<double(cplx)> psi = [&](cplx z) {
        auto cfg = ConfigurationPoint::make(w, {z});
        if (opt.method == AreaMethod::Periods) return wp_area(cfg, *opt.fit, opt.quad).potential;
        if (opt.density) return -std::log(area_integral(opt.density(cfg), opt.area).area);
        return wp_area(cfg, opt.area).potential;
    };
    WPCurvatureReport out;
    out.report.check = "wp-curvature:" + to_string(opt.method);
    out.report.tolerance = opt.tolerance;
    out.report.residuals = {{"K - mean(K)"}};
    out.report.convention = "g = ddbar(-log area), K = -g^{-1} ddbar log g";
    for (const auto& z : grid) {
        if (!(z.imag() > 0)) throw Error(ErrorCode::OutOfDomain, "grid points must lie in the upper half plane");
        const double h = opt.step > 0 ? opt.step : puncture_distance(z) / 16;
        if (h >= puncture_distance(z) / 4) throw Error(ErrorCode::StepTooLarge, "lattice reaches a puncture");
        out.report.samples.push_back({metric::Complex(z.real(), z.imag())});
        out.report.step_min = std::min(out.report.step_min, h / 4);
        out.report.step_max = std::max(out.report.step_max, h);
        // One Richardson level on the fourth-order lattice, at h and at h / 2.
        const double k1 = lattice_curvature(psi, z, h), k2 = lattice_curvature(psi, z, h / 2), k4 = lattice_curvature(psi, z, h / 4);
        out.curvature.push_back((16 * k2 - k1) / 15);
        out.refined_curvature.push_back((16 * k4 - k2) / 15);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.mean += out.curvature[i];
        out.refined_mean += out.refined_curvature[i];
    }
    out.mean /= static_cast<double>(grid.size());
    out.refined_mean /= static_cast<double>(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = std::abs(out.curvature[i] - out.mean);
        out.report.record(0, i, d, d / std::abs(out.mean));
    }
    out.spread = out.report.residuals[0].max_rel;
    out.refinement_shift = std::abs(out.refined_mean - out.mean) / std::abs(out.mean);
    out.negative = std::all_of(out.curvature.begin(), out.curvature.end(), [](double k) { return k < 0; });
    out.report.constant = out.mean;
    out.report.finish();
    out.report.pass = out.report.pass && out.negative && out.refinement_shift <= opt.tolerance;
    return out;
}

// Schwarz–Christoffel -------------------------------------------------------------------

inline std::vector<PowerFactor> equilateral_factors() { return {{0, 2.0 / 3, 1}, {1, 2.0 / 3, -1}}; }

/// int_0^z t^{-2/3} (1-t)^{-2/3} dt along [0, z], z in the closed upper half plane.
inline cplx sc_map(cplx z, const QuadOptions& opt = {}) {
    if (z.imag() < 0) throw Error(ErrorCode::OutOfDomain, "sc_map is defined on the closed upper half plane");
    if (z == cplx(0)) return 0;
    return integrate_segment(equilateral_factors(), 0, z, opt).value;
}

/// The image of infinity, reached along the ray 0 -> direction * inf.
inline cplx sc_map_infinity(cplx direction = {0, 1}, const QuadOptions& opt = {}) {
    return integrate_ray(equilateral_factors(), 0, direction, opt).value;
}

} // namespace dmcone
