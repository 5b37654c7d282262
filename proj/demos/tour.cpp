// A short walk through the library: exact invariants of the six-point
// configuration space, then the numerical metric checks.

#include "dmcone/chern_bmy.hpp"
#include "dmcone/cone_density.hpp"
#include "dmcone/metric_lab.hpp"
#include "dmcone/periods.hpp"
#include "dmcone/stratification.hpp"

#include <iomanip>
#include <iostream>

using namespace dmcone;
using namespace dmcone::literals;

int main() {
    const auto w = WeightSystem::validate(std::vector<Rational>(6, "1/3"_q));
    std::cout << "six points of weight 1/3, n = " << w.dimension() << "\n";

    for (const auto& s : enumerate_strata(w, 2)) {
        if (s.codim != 2) continue;
        std::cout << "  first codim-2 stratum " << s.partition.str() << ", density "
                  << tangent_cone(w, s.partition).total_density << "\n";
        break;
    }
    const auto cusps = enumerate_cusps(w);
    std::cout << "  " << cusps.size() << " cusps, e.g. " << cusps.front().partition.str() << " -> " << cusps.front().cusp_model->str()
              << "\n";

    const std::vector<Rational> mu{"1/5"_q, "1/6"_q, "1/7"_q, "1/8"_q};
    const auto v = volume_density(cpd_arrangement(2, mu));
    std::cout << "\nCP^2 arrangement with point weights 1/5,1/6,1/7,1/8: gamma " << v.gamma << ", nu " << v.nu << "\n";
    auto arr = dm_arrangement(2, mu);
    std::cout << "  log c2 = " << c2_log(arr, arr.numeric_weights()) << ", BMY defect " << bmy_defect(arr, arr.numeric_weights()) << "\n";
    const auto form = prop_form(complete_quadrilateral());
    std::cout << "  complete quadrilateral: kernel dimension " << kernel(form.form).dimension() << "\n";

    std::cout << std::scientific << std::setprecision(2);
    const auto samples = metric::annulus_samples({{0.2L, 1.5L}, {0.4L, 1.5L}}, 8, 1);
    for (long double gamma : {0.5L, 0.75L}) {
        const auto rep = metric::verify_cone_ricci(metric::doubled_fubini_study_base(), gamma, samples);
        std::cout << "\ncone over 2*FS, gamma " << static_cast<double>(gamma) << ": |Ric| / |Ric base| = " << rep.max_rel_residual
                  << (rep.pass ? "  (Ricci-flat)" : "  (not flat)") << "\n";
    }
    const auto cusp = metric::verify_einstein(metric::cusp(), -3, metric::annulus_samples({{0, 0.8L}, {0.2L, 0.5L}}, 8, 2));
    std::cout << "cusp potential: Ric + 3g residual " << cusp.max_rel_residual << "\n";

    const auto w4 = WeightSystem::validate({"3/10"_q, "1/2"_q, "11/20"_q, "13/20"_q});
    std::vector<cplx> grid{{-0.4, 0.5}, {0.2, 0.9}, {0.8, 1.4}, {1.4, 0.5}, {0.5, 0.7}};
    WPCurvatureOptions opt;
    opt.fit = fit_hermitian_form(w4, grid);
    const auto wp = wp_curvature_check(w4, grid, opt);
    std::cout << std::fixed << std::setprecision(6) << "\nWeil-Petersson curvature on M_{0,4}, weights (3/10,1/2,11/20,13/20):\n";
    for (std::size_t i = 0; i < grid.size(); ++i) std::cout << "  K(" << grid[i].real() << "+" << grid[i].imag() << "i) = " << wp.curvature[i] << "\n";
    std::cout << std::scientific << std::setprecision(2) << "  relative spread " << wp.spread << "\n";

    std::cout << std::fixed << std::setprecision(12) << "\nSchwarz-Christoffel map: f(1) = " << sc_map(1).real() << ", |f(inf) - f(1)| = "
              << std::abs(sc_map_infinity() - sc_map(1)) << "\n";
}
