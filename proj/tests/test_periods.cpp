#include "dmcone/periods.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <chrono>
#include <numbers>

using namespace dmcone;
using namespace dmcone::literals;

namespace {

WeightSystem halves() { return WeightSystem::validate({"1/2"_q, "1/2"_q, "1/2"_q, "1/2"_q}); }
WeightSystem generic4() { return WeightSystem::validate({"3/10"_q, "1/2"_q, "11/20"_q, "13/20"_q}); }

// Independent oracle: tanh-sinh on the real and imaginary parts. The integrand
// receives (x, distance to the nearer endpoint) so factors vanishing at an
// endpoint keep full relative precision.
cplx tanh_sinh(const std::function<cplx(double, double, double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto lo = [&](double x, double xc) { return x < (a + b) / 2 ? (xc < 0 ? -xc : x - a) : x - a; };
    auto hi = [&](double x, double xc) { return x >= (a + b) / 2 ? (xc > 0 ? xc : b - x) : b - x; };
    const double re = ts.integrate([&](double x, double xc) { return f(x, lo(x, xc), hi(x, xc)).real(); }, a, b, 1e-14);
    const double im = ts.integrate([&](double x, double xc) { return f(x, lo(x, xc), hi(x, xc)).imag(); }, a, b, 1e-14);
    return {re, im};
}

std::vector<cplx> interior_grid() {
    std::vector<cplx> g;
    for (double x : {-0.4, 0.2, 0.8, 1.4})
        for (double y : {0.5, 0.9, 1.4}) g.emplace_back(x, y);
    return g;
}

} // namespace

TEST(GaussJacobi, LegendreCase) {
    auto rule = gauss_jacobi(0, 0, 5);
    for (int k = 0; k < 10; ++k)
        EXPECT_NEAR(rule.integrate([&](double t) { return std::pow(t, k); }), 1.0 / (k + 1), 1e-15);
}

TEST(GaussJacobi, EndpointSingularities) {
    EXPECT_NEAR(gauss_jacobi(-0.5, 0, 4).integrate([](double) { return 1.0; }), 2.0, 1e-14);
    const double oracle = std::tgamma(1.0 / 3) * std::tgamma(1.0 / 3) / std::tgamma(2.0 / 3);
    EXPECT_NEAR(gauss_jacobi(-2.0 / 3, -2.0 / 3, 12).integrate([](double) { return 1.0; }), oracle, 1e-10);
    EXPECT_NEAR(oracle, 5.2999, 1e-4);
}

TEST(GaussJacobi, MomentsReproduced) {
    for (auto [a, b] : {std::pair{-0.5, 0.3}, {-2.0 / 3, -2.0 / 3}, {0.4, -0.9}, {-0.3, 0.0}, {1.5, 2.0}})
        for (int order : {1, 4, 12, 24}) {
            auto rule = gauss_jacobi(a, b, order);
            for (int k = 0; k < 2 * order; ++k) {
                const double exact = static_cast<double>(beta_function(a + k + 1, b + 1));
                EXPECT_NEAR(rule.integrate([&](double t) { return std::pow(t, k); }) / exact, 1.0, 1e-12)
                    << "a=" << a << " b=" << b << " order=" << order << " k=" << k;
            }
        }
}

TEST(GaussJacobi, Errors) {
    try {
        (void)gauss_jacobi(-1, 0, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ExponentOutOfRange);
    }
    EXPECT_THROW((void)gauss_jacobi(0, 0, 0), Error);
}

TEST(AdaptiveJacobi, NearSingularInterior) {
    // s^{-1/2} / ((s - 0.3)^2 + 1e-6) has a sharp interior peak.
    auto r = integrate_jacobi_adaptive(-0.5, 0, [](double s) { return 1.0 / ((s - 0.3) * (s - 0.3) + 1e-6); });
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle = ts.integrate([](double s) { return std::pow(s, -0.5) / ((s - 0.3) * (s - 0.3) + 1e-6); }, 0.0, 0.3, 1e-14) +
                          ts.integrate([](double s) { return std::pow(s, -0.5) / ((s - 0.3) * (s - 0.3) + 1e-6); }, 0.3, 1.0, 1e-14);
    EXPECT_NEAR(r.value / oracle, 1.0, 1e-10);
}

TEST(Period, PolynomialCaseIsDisplacement) {
    auto w = WeightSystem::validate({"1/2"_q, "1/2"_q, "1/2"_q, "1/2"_q});
    ConfigurationPoint cfg = ConfigurationPoint::make(w, {cplx(0.3, 0.8)});
    std::fill(cfg.mu.begin(), cfg.mu.end(), 0.0);
    EXPECT_LT(std::abs(period(cfg, 2, 3).value - cplx(1, 0)), 1e-15);
    EXPECT_LT(std::abs(period(cfg, 1, 2).value - (cplx(0) - cplx(0.3, 0.8))), 1e-15);
}

TEST(Period, UnitSegmentAgainstTanhSinh) {
    auto w = generic4();
    for (cplx z : {cplx(0.3, 0.8), cplx(-0.7, 0.2), cplx(1.6, 1.1), cplx(0.5, 0.05)}) {
        auto cfg = ConfigurationPoint::make(w, {z});
        const double m1 = cfg.mu[0], m2 = cfg.mu[1], m3 = cfg.mu[2];
        // Principal (t - z)^{-mu1} is continuous on [0,1] for z off the segment;
        // (t - 1)^{-mu3} = e^{-i pi mu3} (1 - t)^{-mu3} from the midpoint branch.
        const cplx oracle = std::exp(cplx(0, -std::numbers::pi * m3)) *
                            tanh_sinh([&](double t, double t0, double t1) { return std::pow(t0, -m2) * std::pow(t1, -m3) * std::pow(cplx(t) - z, -m1); }, 0, 1);
        auto p = period(cfg, 2, 3);
        EXPECT_LT(std::abs(p.value - oracle) / std::abs(oracle), 1e-9) << z;
        EXPECT_LT(p.error, 1e-12 * std::abs(oracle) * 10);
    }
}

TEST(Period, RayAgainstTanhSinh) {
    auto w = generic4();
    const cplx z(0.3, 0.8);
    auto cfg = ConfigurationPoint::make(w, {z});
    const cplx e(0, 1);
    auto f = [&](double s, double s0) {
        const cplx t = z + s * e;
        return e * std::pow(t, -cfg.mu[1]) * std::pow(t - 1.0, -cfg.mu[2]) * std::pow(s0 * e, -cfg.mu[0]);
    };
    // Principal powers are continuous along this ray and agree with the
    // far-end branch. Tail: s = 1/u on (0,1].
    const cplx head = tanh_sinh([&](double s, double s0, double) { return f(s, s0); }, 0, 1);
    const cplx tail = tanh_sinh([&](double, double u, double) {
        cplx v = e * std::pow(u, cfg.mu[0] + cfg.mu[1] + cfg.mu[2] - 2) * std::pow(e, -cfg.mu[0]);
        v *= std::pow(u * z + e, -cfg.mu[1]) * std::pow(u * (z - 1.0) + e, -cfg.mu[2]);
        return v;
    }, 0, 1);
    const cplx oracle = head + tail;
    auto p = period(cfg, 1, 4);
    EXPECT_LT(std::abs(p.value - oracle) / std::abs(oracle), 1e-9);
    // Reversed orientation.
    EXPECT_LT(std::abs(period(cfg, 4, 1).value + p.value), 1e-15 * std::abs(p.value) * 10);
}

TEST(Period, RealConfigurationHasConstantPhase) {
    auto cfg = ConfigurationPoint::make(generic4(), {cplx(-0.6, 0)});
    auto p = period(cfg, 2, 3).value * std::exp(cplx(0, std::numbers::pi * cfg.mu[2]));
    EXPECT_LT(std::abs(p.imag()), 1e-14 * std::abs(p));
    EXPECT_GT(p.real(), 0);
}

TEST(Period, ConjugateConfiguration) {
    auto w = generic4();
    const cplx z(0.3, 0.8);
    auto p = period(ConfigurationPoint::make(w, {z}), 2, 3).value;
    auto q = period(ConfigurationPoint::make(w, {std::conj(z)}), 2, 3).value;
    const cplx phase = std::exp(cplx(0, -2 * std::numbers::pi * w.mu()[2].to_double()));
    EXPECT_LT(std::abs(q - phase * std::conj(p)), 1e-13 * std::abs(p));
}

TEST(Period, PunctureOnSegment) {
    auto cfg = ConfigurationPoint::make(generic4(), {cplx(0.5, 0)});
    try {
        (void)period(cfg, 2, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PunctureOnSegment);
    }
    auto up = ConfigurationPoint::make(generic4(), {cplx(0, 2)});
    EXPECT_THROW((void)period(up, 2, 4), Error);  // ray from 0 upward meets z = 2i
}

TEST(Period, FivePointsUseTheSameIntegrator) {
    auto w = WeightSystem::validate({"2/5"_q, "2/5"_q, "2/5"_q, "2/5"_q, "2/5"_q});
    auto cfg = ConfigurationPoint::make(w, {cplx(0.3, 0.9), cplx(-0.5, 0.4)});
    auto p = period(cfg, 3, 4).value;  // [0,1]
    const cplx oracle = std::exp(cplx(0, -std::numbers::pi * 0.4)) * tanh_sinh([&](double t, double t0, double t1) {
                            return std::pow(t0, -0.4) * std::pow(t1, -0.4) * std::pow(cplx(t) - cfg.z[0], -0.4) * std::pow(cplx(t) - cfg.z[1], -0.4);
                        }, 0, 1);
    EXPECT_LT(std::abs(p - oracle) / std::abs(oracle), 1e-9);
}

TEST(AreaOracle, PolynomialDensityOnDisk) {
    // Density (1+|t|^2)^{-2}: area 2 * pi.
    AreaDensity d;
    d.kappa = 2;
    auto r = area_integral(d);
    EXPECT_NEAR(r.area, 2 * std::numbers::pi, 1e-11);
}

TEST(AreaOracle, SinglePuncturePlusDecay) {
    // |t|^{-2 mu} (1+|t|^2)^{-kappa}: 2 * pi * B(1 - mu, mu + kappa - 1).
    for (auto [mu, kappa] : {std::pair{0.5, 1.0}, {0.3, 1.5}, {0.8, 0.7}}) {
        AreaDensity d;
        d.finite = {{0, mu}};
        d.kappa = kappa;
        auto r = area_integral(d);
        const double exact = 2 * std::numbers::pi * static_cast<double>(beta_function(1 - mu, mu + kappa - 1));
        EXPECT_NEAR(r.area / exact, 1.0, 1e-11) << mu << " " << kappa;
        EXPECT_LT(r.error, 1e-11 * r.area);
    }
}

TEST(AreaOracle, ScalingAndErrors) {
    auto cfg = ConfigurationPoint::make(generic4(), {cplx(0.3, 0.8)});
    auto base = AreaDensity::of(cfg);
    auto a = area_integral(base).area;
    // Multiplying Omega by c scales the area by |c|^2: shift every finite
    // exponent's point set by an overall affine map t -> 2t instead.
    AreaDensity scaled = base;
    for (auto& [p, m] : scaled.finite) p *= 2.0;
    // t -> 2t: area picks up 2^{2 - 2 sum mu} = 2^{2 mu_inf - 2}.
    const double mu_inf = base.infinity_exponent();
    EXPECT_NEAR(area_integral(scaled).area / (a * std::pow(2.0, 2 * mu_inf - 2)), 1.0, 1e-10);
    const auto wp = wp_area(cfg);
    EXPECT_NEAR(wp.potential, -std::log(wp.area), 1e-15);

    AreaDensity bad;
    bad.finite = {{0, 1.0}, {1, 0.5}, {2, 0.5}};
    try {
        (void)area_integral(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonIntegrable);
    }
    AreaOptions tight;
    tight.max_cells = 10;
    tight.rel_tol = 1e-15;
    EXPECT_THROW((void)area_integral(base, tight), Error);
}

TEST(AreaOracle, SymmetriesAtHalves) {
    auto w = halves();
    for (cplx z : {cplx(0.3, 0.8), cplx(-0.7, 0.4), cplx(1.8, 0.3)}) {
        const double a = wp_area(ConfigurationPoint::make(w, {z})).area;
        const double b = wp_area(ConfigurationPoint::make(w, {1.0 - z})).area;
        const double c = wp_area(ConfigurationPoint::make(w, {1.0 / z})).area;
        EXPECT_NEAR(a / b, 1.0, 1e-10) << z;
        // t = z s: A(z) = |z|^{2(mu_inf - 1)} A(1/z) = |z|^{-1} A(1/z).
        EXPECT_NEAR(a / (c / std::abs(z)), 1.0, 1e-10) << z;
    }
}

TEST(AreaOracle, SymmetricPointIsCriticalUpToCocycle) {
    // psi(x) - log|x| / 2 is invariant under x -> 1/x, so critical at x = -1.
    auto w = halves();
    auto psi = [&](double x) { return wp_area(ConfigurationPoint::make(w, {cplx(x, 0)})).potential - 0.5 * std::log(std::abs(x)); };
    const double h = 1e-2;
    const double derivative = (psi(-1 - 2 * h) - 8 * psi(-1 - h) + 8 * psi(-1 + h) - psi(-1 + 2 * h)) / (12 * h);
    EXPECT_LT(std::abs(derivative), 1e-8);
    const double raw = (wp_area(ConfigurationPoint::make(w, {cplx(-1 + h, 0)})).potential -
                        wp_area(ConfigurationPoint::make(w, {cplx(-1 - h, 0)})).potential) / (2 * h);
    EXPECT_NEAR(raw, -0.5, 1e-4);
}

TEST(AreaOracle, RelabelingInvariance) {
    // Swapping 0 and 1 with their weights is the substitution t -> 1 - t.
    auto w = generic4();
    auto swapped = WeightSystem::validate({"3/10"_q, "11/20"_q, "1/2"_q, "13/20"_q});
    for (cplx z : {cplx(0.3, 0.8), cplx(1.4, 0.5)}) {
        const double a = wp_area(ConfigurationPoint::make(w, {z})).area;
        const double b = wp_area(ConfigurationPoint::make(swapped, {1.0 - z})).area;
        EXPECT_NEAR(a / b, 1.0, 1e-10);
    }
}

TEST(AreaOracle, FiniteAndPositiveOnGrid) {
    auto w = generic4();
    for (const auto& z : interior_grid()) {
        auto v = wp_area(ConfigurationPoint::make(w, {z}));
        EXPECT_GT(v.area, 0);
        EXPECT_TRUE(std::isfinite(v.potential));
        EXPECT_LT(v.error, 1e-11 * v.area);
    }
}

TEST(HermitianFit, PeriodsReproduceTheOracle) {
    auto w = generic4();
    std::vector<cplx> fit_points{{0.3, 0.8}, {-0.5, 0.6}, {1.5, 0.9}, {0.6, 1.7}, {0.1, 0.3}, {0.9, 0.4}};
    auto fit = fit_hermitian_form(w, fit_points);
    EXPECT_LT(fit.fit_residual, 1e-9);
    EXPECT_LT(fit.determinant(), 0);  // signature (1,1)
    for (const auto& z : interior_grid()) {
        auto cfg = ConfigurationPoint::make(w, {z});
        const double oracle = wp_area(cfg).area;
        const double periods = wp_area(cfg, fit).area;
        EXPECT_LT(std::abs(periods / oracle - 1), 1e-6) << z;
    }
}

TEST(WPCurvature, ConstantAndNegative) {
    auto w = generic4();
    auto fit = fit_hermitian_form(w, {{0.3, 0.8}, {-0.5, 0.6}, {1.5, 0.9}, {0.6, 1.7}, {0.1, 0.3}, {0.9, 0.4}});
    WPCurvatureOptions opt;
    opt.fit = fit;
    auto rep = wp_curvature_check(w, interior_grid(), opt);
    EXPECT_TRUE(rep.negative);
    EXPECT_LT(rep.spread, 1e-3);
    EXPECT_LT(rep.refinement_shift, 1e-3);
    EXPECT_TRUE(rep.report.pass);
    std::cout << "recorded WP curvature (periods): " << rep.mean << "\n";
}

TEST(WPCurvature, OracleRouteAgrees) {
    auto w = generic4();
    WPCurvatureOptions opt;
    opt.method = AreaMethod::AreaOracle;
    auto start = std::chrono::steady_clock::now();
    auto rep = wp_curvature_check(w, {{0.3, 0.8}, {1.4, 0.9}, {-0.4, 1.4}}, opt);
    std::cout << "oracle curvature: " << rep.mean << " spread " << rep.spread << " in "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
    EXPECT_TRUE(rep.negative);
    EXPECT_LT(rep.spread, 1e-3);
}

TEST(WPCurvature, SymmetricUnderOneMinusZ) {
    auto w = halves();
    auto fit = fit_hermitian_form(w, {{0.3, 0.8}, {-0.5, 0.6}, {1.5, 0.9}, {0.6, 1.7}, {0.1, 0.3}, {0.9, 0.4}});
    WPCurvatureOptions opt;
    opt.fit = fit;
    std::vector<cplx> grid{{0.2, 0.6}, {-0.3, 1.1}, {0.6, 0.9}};
    std::vector<cplx> mirrored;
    for (auto z : grid) mirrored.push_back(1.0 - std::conj(z));  // stays in the upper half plane
    auto a = wp_curvature_check(w, grid, opt);
    auto b = wp_curvature_check(w, mirrored, opt);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(a.curvature[i], b.curvature[i], 5e-5 * std::abs(a.curvature[i]));
}

TEST(WPCurvature, NonHolomorphicDensityBreaksConstancy) {
    auto w = generic4();
    WPCurvatureOptions opt;
    opt.method = AreaMethod::AreaOracle;
    opt.density = [](const ConfigurationPoint& cfg) {
        auto d = AreaDensity::of(cfg);
        d.kappa = 0.5;
        return d;
    };
    auto rep = wp_curvature_check(w, {{0.3, 0.8}, {1.4, 0.9}, {-0.4, 1.4}}, opt);
    EXPECT_GT(rep.spread, 1e-2);
    EXPECT_FALSE(rep.report.pass);
}

TEST(ScMap, BetaValueAndOrigin) {
    const double beta = std::tgamma(1.0 / 3) * std::tgamma(1.0 / 3) / std::tgamma(2.0 / 3);
    auto one = sc_map(1);
    EXPECT_NEAR(one.real(), beta, 1e-12);
    EXPECT_NEAR(one.imag(), 0, 1e-14);
    EXPECT_EQ(sc_map(0), cplx(0));
    EXPECT_THROW((void)sc_map(cplx(0.3, -0.1)), Error);
    EXPECT_THROW((void)sc_map(cplx(2, 0)), Error);
}

TEST(ScMap, EquilateralTriangle) {
    const cplx a = sc_map(0), b = sc_map(1), c = sc_map_infinity();
    const double s1 = std::abs(b - a), s2 = std::abs(c - b), s3 = std::abs(c - a);
    EXPECT_NEAR(s2 / s1, 1.0, 1e-6);
    EXPECT_NEAR(s3 / s1, 1.0, 1e-6);
    // Upper half plane maps into the triangle.
    const cplx inside = sc_map(cplx(0.4, 0.6));
    EXPECT_GT(inside.imag(), 0);
    EXPECT_LT(std::abs(inside - (a + b + c) / 3.0), s1 / std::sqrt(3.0));
}
