#pragma once

// The thirteen acceptance criteria as named, self-timed checks.

#include "dmcone/chern_bmy.hpp"
#include "dmcone/cone_density.hpp"
#include "dmcone/jacobi.hpp"
#include "dmcone/metric_lab.hpp"
#include "dmcone/periods.hpp"
#include "dmcone/stratification.hpp"
#include "dmcone/weights.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace dmcone::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string tolerance;
    std::string detail;
    double seconds = 0;
    double budget_seconds = 0;  // 0: no runtime bound
};

struct Criterion {
    int id;
    std::string name;
    std::string tolerance;
    double budget_seconds;
    std::function<bool(std::string&)> check;
};

namespace detail {

inline std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

/// k weights in (0,1) with sum strictly below 1.
inline std::vector<Rational> subunit_weights(std::mt19937_64& rng, int k) {
    std::uniform_int_distribution<int> draw(1, 60), slack(1, 40);
    std::vector<long long> a(static_cast<std::size_t>(k));
    for (auto& x : a) x = draw(rng);
    const long long total = std::accumulate(a.begin(), a.end(), 0LL) + slack(rng);
    std::vector<Rational> mu;
    for (auto x : a) mu.push_back(Rational(x) / Rational(total));
    return mu;
}

/// Deligne–Mostow weights on N points, rejection-sampled until all are below 1.
inline WeightSystem dm_weights(std::mt19937_64& rng, int points, int granularity) {
    std::uniform_int_distribution<int> draw(1, granularity);
    for (;;) {
        std::vector<long long> a(static_cast<std::size_t>(points));
        for (auto& x : a) x = draw(rng);
        const long long total = std::accumulate(a.begin(), a.end(), 0LL);
        std::vector<Rational> mu;
        bool ok = true;
        for (auto x : a) {
            mu.push_back(Rational(2 * x) / Rational(total));
            if (mu.back() >= Rational(1)) ok = false;
        }
        if (ok) return WeightSystem::validate(mu);
    }
}

inline bool all_zero(const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); });
}

inline WeightSystem six_thirds() { return WeightSystem::validate(std::vector<Rational>(6, Rational(1) / Rational(3))); }

} // namespace detail

inline bool density_formula(std::string& out) {
    std::mt19937_64 rng(1001);
    int checked = 0;
    for (int d = 1; d <= 4; ++d)
        for (int t = 0; t < 50; ++t) {
            auto mu = detail::subunit_weights(rng, d + 2);
            Rational s(0);
            for (const auto& m : mu) s += m;
            if (volume_density(cpd_arrangement(d, mu)).nu != pow(Rational(1) - s, static_cast<unsigned>(d + 1))) {
                out = "mismatch at d=" + std::to_string(d);
                return false;
            }
            ++checked;
        }
    out = std::to_string(checked) + " exact equalities";
    return true;
}

inline bool bmy_identity(std::string& out) {
    std::mt19937_64 rng(1002);
    int checked = 0;
    for (int n = 2; n <= 5; ++n)
        for (int t = 0; t < 50; ++t) {
            auto arr = dm_arrangement(n, detail::subunit_weights(rng, n + 2));
            const Rational defect = bmy_defect(arr, arr.numeric_weights());
            if (!defect.is_zero()) {
                out = "defect " + defect.str() + " at n=" + std::to_string(n);
                return false;
            }
            ++checked;
        }
    out = std::to_string(checked) + " arrangements with defect 0";
    return true;
}

inline bool quadrilateral_kernel(std::string& out) {
    auto form = prop_form(complete_quadrilateral());
    const auto k = kernel(form.form);
    bool in_kernel = true;
    for (const auto& v : k.basis) in_kernel = in_kernel && detail::all_zero(form.form.matrix().apply(v));
    out = "homogeneous quadratic in " + std::to_string(form.variables.size()) + " weights, kernel dimension " + std::to_string(k.dimension());
    return form.form.is_homogeneous_quadratic() && in_kernel && k.dimension() == 4;
}

inline bool dm_null_space(std::string& out) {
    for (int n = 2; n <= 4; ++n) {
        auto form = prop_form(dm_arrangement(n));
        const auto basis = dm_family_basis(n);
        if (basis.size() != static_cast<std::size_t>(n + 2)) return false;
        for (const auto& v : basis)
            if (!detail::all_zero(form.form.matrix().apply(v))) {
                out = "family vector outside the kernel at n=" + std::to_string(n);
                return false;
            }
    }
    out = "n+2 basis vectors annihilated for n = 2, 3, 4";
    return true;
}

inline bool six_points(std::string& out) {
    const auto w = detail::six_thirds();
    const auto strata = enumerate_strata(w, 1);
    const auto cusps = enumerate_cusps(w);
    bool segre = true;
    for (const auto& c : cusps) segre = segre && c.cusp_model && c.cusp_model->str() == "SegreCone(1,1)";
    int pairs = 0;
    bool ninths = true;
    for (int a = 1; a <= 6; ++a)
        for (int b = a + 1; b <= 6; ++b)
            for (int c = a + 1; c <= 6; ++c)
                for (int d = c + 1; d <= 6; ++d) {
                    if (c == b || d == b) continue;
                    ++pairs;
                    ninths = ninths && codim2_cone(w, {a, b}, {c, d}).total_density == Rational(1) / Rational(9);
                }
    out = std::to_string(strata.size()) + " divisors, " + std::to_string(cusps.size()) + " cusps, " + std::to_string(pairs) +
          " pair-pair densities";
    return strata.size() == 15 && cusps.size() == 10 && segre && ninths && pairs == 45;
}

inline bool cross_path_density(std::string& out) {
    std::mt19937_64 rng(1006);
    int checked = 0;
    while (checked < 200) {
        const int points = 4 + static_cast<int>(rng() % 5);
        auto w = detail::dm_weights(rng, points, 12);
        auto strata = enumerate_strata(w, w.dimension());
        if (strata.empty()) continue;
        const auto& s = strata[rng() % strata.size()];
        if (!crosscheck_stratum_density(w, s.partition)) {
            out = "disagreement on " + s.partition.str();
            return false;
        }
        ++checked;
    }
    out = "200 random stable partitions agree exactly";
    return true;
}

inline bool cone_ricci_flat(std::string& out) {
    const auto samples = metric::annulus_samples({{0.2L, 1.5L}, {0.4L, 1.5L}}, 20, 11);
    const auto flat = metric::verify_cone_ricci(metric::doubled_fubini_study_base(), 0.5L, samples);
    const auto control = metric::verify_cone_ricci(metric::doubled_fubini_study_base(), 0.75L, samples);
    out = "gamma=1/2 residual " + detail::fmt(flat.max_rel_residual) + ", gamma=3/4 residual " + detail::fmt(control.max_rel_residual);
    return flat.max_rel_residual <= 1e-4 && control.max_rel_residual >= 1e-2;
}

inline bool lambda_modification(std::string& out) {
    const auto samples = metric::annulus_samples({{0.2L, 0.6L}, {0.1L, 0.6L}}, 10, 13);
    double worst = 0;
    bool ok = true;
    for (const auto& cone : {metric::flat(2), metric::conical_flat(2, 0.5L)})
        for (int lambda : {1, -1}) {
            const auto rep = metric::verify_lambda_modification(cone, lambda, samples);
            worst = std::max(worst, rep.max_rel_residual);
            ok = ok && rep.pass && rep.residuals[0].max_rel <= 1e-4 && rep.residuals[1].max_rel <= 1e-4;
        }
    out = "worst relative residual " + detail::fmt(worst) + " over flat/conical, lambda = +1/-1";
    return ok;
}

inline bool cusp_metric(std::string& out) {
    const auto rep = metric::verify_einstein(metric::cusp(), -3, metric::annulus_samples({{0, 0.8L}, {0.2L, 0.5L}}, 20, 7));
    out = "Ric = -3g residual " + detail::fmt(rep.max_rel_residual);
    return rep.pass && rep.max_rel_residual <= 1e-4;
}

inline bool chsc_constancy(std::string& out) {
    bool ok = true;
    double worst = 0, drift = 0;
    for (int sign : {1, -1}) {
        const auto samples = sign > 0 ? metric::annulus_samples({{0.3L, 1.5L}}, 12, 2) : metric::annulus_samples({{0.3L, 0.7L}}, 12, 2);
        const double reference = *metric::verify_constant_curvature(metric::chsc(sign, 1), samples).constant;
        for (long double beta : {0.5L, 0.75L, 1.0L}) {
            const auto rep = metric::verify_constant_curvature(metric::chsc(sign, beta), samples, 1e-6);
            worst = std::max(worst, rep.max_rel_residual);
            const double d = std::abs(*rep.constant - reference) / std::abs(reference);
            drift = std::max(drift, d);
            ok = ok && rep.pass && d <= 1e-6;
        }
    }
    out = "spread " + detail::fmt(worst) + ", distance to beta=1 constant " + detail::fmt(drift);
    return ok;
}

inline bool cone_to_cusp(std::string& out) {
    const auto t = metric::verify_cone_to_cusp(metric::linspace(0.1, 0.9, 17), {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    const auto& last = t.rows.back();
    out = std::string(t.monotone ? "monotone" : "not monotone") + ", deviation at gamma=1e-6 is " + detail::fmt(last.max_deviation) +
          " (rho=" + detail::fmt(last.argmax_rho) + ")";
    return t.monotone && last.max_deviation < 1e-5;
}

inline bool quadrature(std::string& out) {
    const double third = 1.0 / 3;
    const double exact = std::tgamma(third) * std::tgamma(third) / std::tgamma(2 * third);
    const double beta = gauss_jacobi(-2 * third, -2 * third, 8).integrate([](double) { return 1.0; });
    const cplx one = sc_map(1);
    const double side_a = std::abs(one - sc_map(0));
    const double side_b = std::abs(sc_map_infinity() - one);
    out = "Beta error " + detail::fmt(std::abs(beta - exact)) + ", side difference " + detail::fmt(std::abs(side_a - side_b));
    return std::abs(beta - exact) <= 1e-10 && std::abs(side_a - side_b) <= 1e-6;
}

/// Twelve interior points of the upper half plane away from 0 and 1.
inline std::vector<cplx> wp_grid() {
    std::vector<cplx> g;
    for (double y : {0.5, 0.9, 1.4})
        for (double x : {-0.4, 0.2, 0.8, 1.4}) g.emplace_back(x, y);
    return g;
}

inline bool wp_curvature(std::string& out) {
    const auto w = WeightSystem::validate({Rational(3) / Rational(10), Rational(1) / Rational(2), Rational(11) / Rational(20),
                                           Rational(13) / Rational(20)});
    const auto grid = wp_grid();
    WPCurvatureOptions opt;
    opt.fit = fit_hermitian_form(w, grid);
    const auto rep = wp_curvature_check(w, grid, opt);
    std::vector<cplx> dense;
    for (double y : {0.5, 0.7, 0.9, 1.15, 1.4})
        for (double x : {-0.4, -0.1, 0.2, 0.5, 0.8, 1.1, 1.4}) dense.emplace_back(x, y);
    const auto fine = wp_curvature_check(w, dense, opt);
    const double grid_shift = std::abs(fine.mean - rep.mean) / std::abs(rep.mean);
    out = "K = " + detail::fmt(rep.mean) + " (recorded), spread " + detail::fmt(rep.spread) + ", step refinement shift " +
          detail::fmt(rep.refinement_shift) + ", 35-point grid shift " + detail::fmt(grid_shift) + ", fit residual " +
          detail::fmt(opt.fit->fit_residual);
    return rep.negative && rep.spread <= 1e-3 && rep.refinement_shift <= 1e-3 && fine.negative && grid_shift <= 1e-3;
}

inline std::vector<Criterion> criteria() {
    return {
        {1, "density formula equivalence", "exact", 5, density_formula},
        {2, "BMY identity on DM arrangements", "exact", 5, bmy_identity},
        {3, "complete quadrilateral kernel", "exact", 1, quadrilateral_kernel},
        {4, "DM null-space family", "exact", 0, dm_null_space},
        {5, "six-points stratification", "exact", 1, six_points},
        {6, "cross-path density", "exact", 0, cross_path_density},
        {7, "cone Ricci-flatness", "1e-4 / control >= 1e-2", 30, cone_ricci_flat},
        {8, "lambda-modification", "1e-4", 0, lambda_modification},
        {9, "cusp metric Ric = -3g", "1e-4", 0, cusp_metric},
        {10, "CHSC constancy", "1e-6", 0, chsc_constancy},
        {11, "cone-to-cusp limit", "< 1e-5 at gamma = 1e-6", 0, cone_to_cusp},
        {12, "Gauss-Jacobi and Schwarz-Christoffel", "1e-10 / 1e-6", 0, quadrature},
        {13, "WP curvature constancy", "1e-3", 180, wp_curvature},
    };
}

inline CriterionResult run(const Criterion& c) {
    CriterionResult r{c.id, c.name, false, c.tolerance, {}, 0, c.budget_seconds};
    const auto start = std::chrono::steady_clock::now();
    try {
        r.pass = c.check(r.detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.budget_seconds > 0 && r.seconds > r.budget_seconds) {
        r.pass = false;
        r.detail += "; runtime " + detail::fmt(r.seconds) + " s exceeds " + detail::fmt(r.budget_seconds) + " s";
    }
    return r;
}

/// Runs the selected criteria (all when `only` is empty), in order.
inline std::vector<CriterionResult> run_all(const std::set<int>& only = {}) {
    std::vector<CriterionResult> out;
    for (const auto& c : criteria())
        if (only.empty() || only.count(c.id)) out.push_back(run(c));
    return out;
}

inline std::string line(const CriterionResult& r) {
    std::ostringstream s;
    s << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  [" << r.detail << "; "
      << detail::fmt(r.seconds) << " s]";
    return s.str();
}

} // namespace dmcone::acceptance
