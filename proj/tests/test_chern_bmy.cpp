#include "dmcone/chern_bmy.hpp"
#include "dmcone/cone_density.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace dmcone;
using namespace dmcone::literals;

namespace {

std::vector<Rational> uniform(std::size_t count, const Rational& v) { return std::vector<Rational>(count, v); }

Rational total(const std::vector<Rational>& mu) {
    Rational s(0);
    for (const auto& m : mu) s += m;
    return s;
}

} // namespace

TEST(C1Log, Examples) {
    WeightedArrangement plane; // CP^2, no divisors
    EXPECT_EQ(c1_log(plane, std::vector<Rational>{}), Rational(3));
    auto line = general_lines(1);
    EXPECT_EQ(c1_log(line, std::vector<Rational>{"2/5"_q}), Rational(3) - "2/5"_q);
}

TEST(C1Log, DmArrangement) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 5; ++n) {
        auto mu = dmtest::random_subunit_weights(rng, n + 2);
        auto arr = dm_arrangement(n, mu);
        EXPECT_EQ(c1_log(arr, arr.numeric_weights()), Rational(n + 1) * (Rational(1) - total(mu)));
    }
}

TEST(Codim2Density, Examples) {
    EXPECT_EQ(codim2_density(StratumType::DoublePoint, std::vector<Rational>{"1/2"_q, "1/3"_q}), "1/6"_q);
    for (const auto& beta : {"1/2"_q, "2/3"_q, "9/10"_q}) {
        auto nu = codim2_density(StratumType::MultiplePoint, uniform(3, beta));
        EXPECT_EQ(nu, pow((Rational(3) * beta - Rational(1)) / Rational(2), 2));
    }
    EXPECT_THROW((void)codim2_density(StratumType::MultiplePoint, uniform(3, "1/3"_q)), Error);
    EXPECT_THROW((void)codim2_density(StratumType::DoublePoint, uniform(3, "1/2"_q)), Error);
}

TEST(Codim2Density, DmTriplePoint) {
    // H_ij, H_ik, H_jk with mu_ab = mu_a + mu_b: density (1 - mu_i - mu_j - mu_k)^2.
    Rational mi = "1/7"_q, mj = "1/5"_q, mk = "1/4"_q;
    std::vector<Rational> betas{Rational(1) - mi - mj, Rational(1) - mi - mk, Rational(1) - mj - mk};
    EXPECT_EQ(codim2_density(StratumType::MultiplePoint, betas), pow(Rational(1) - mi - mj - mk, 2));
}

TEST(Codim2Density, MultiplePointMatchesConeOverPunctures) {
    // k lines through a point: the tangent cone is the Calabi lift of CP^1
    // with k cone points, i.e. volume_density with I = 2, m = 1, c1 = 2.
    std::mt19937_64 rng(9);
    for (int k = 3; k <= 7; ++k) {
        std::vector<Rational> betas;
        for (int j = 0; j < k; ++j) betas.push_back(Rational(1) - Rational(1, 3 * k) * Rational(1 + static_cast<long long>(rng() % 5)) / Rational(2));
        LogFanoConeData base;
        base.n = 1;
        base.index = 2;
        base.multiple = 1;
        base.c1n = 2;
        for (const auto& b : betas) base.divisors.push_back({1, b});
        EXPECT_EQ(codim2_density(StratumType::MultiplePoint, betas), volume_density(base).nu);
    }
}

TEST(C2Log, Examples) {
    WeightedArrangement plane;
    EXPECT_EQ(c2_log(plane, std::vector<Rational>{}), Rational(3));
    auto triangle = general_lines(3);
    for (const auto& mu : {"1/2"_q, "1/5"_q, "4/7"_q})
        EXPECT_EQ(c2_log(triangle, uniform(3, mu)), Rational(3) - Rational(6) * mu + Rational(3) * mu * mu);
}

TEST(C2Log, DmArrangementClosedForm) {
    std::mt19937_64 rng(6);
    for (int n = 2; n <= 5; ++n)
        for (int t = 0; t < 5; ++t) {
            auto mu = dmtest::random_subunit_weights(rng, n + 2);
            auto arr = dm_arrangement(n, mu);
            Rational s = total(mu);
            EXPECT_EQ(c2_log(arr, arr.numeric_weights()),
                      Rational((n + 1) * n, 2) * (Rational(1) - Rational(2) * s + s * s));
        }
}

TEST(C2Log, StratumCounts) {
    for (int n = 2; n <= 5; ++n) {
        auto arr = dm_arrangement(n);
        std::size_t doubles = 0, triples = 0;
        for (const auto& s : arr.strata) (s.type == StratumType::DoublePoint ? doubles : triples)++;
        const int p = n + 2;
        EXPECT_EQ(arr.divisors.size(), static_cast<std::size_t>(p * (p - 1) / 2));
        EXPECT_EQ(Rational(static_cast<long long>(doubles)), binomial(p, 2) * binomial(p - 2, 2) / Rational(2));
        EXPECT_EQ(Rational(static_cast<long long>(triples)), binomial(p, 3));
    }
}

TEST(BmyDefect, Examples) {
    WeightedArrangement plane;
    EXPECT_EQ(bmy_defect(plane, std::vector<Rational>{}), Rational(0));
    EXPECT_EQ(bmy_defect(general_lines(3), uniform(3, "1/2"_q)), Rational(0));
    for (const auto& mu : {"1/3"_q, "1/5"_q}) {
        EXPECT_EQ(bmy_defect(general_lines(3), uniform(3, mu)), Rational(0));
        EXPECT_EQ(bmy_defect(general_lines(4), uniform(4, mu)), Rational(4) * mu * mu);
    }
}

TEST(BmyDefect, DmArrangementVanishes) {
    std::mt19937_64 rng(8);
    for (int n = 2; n <= 5; ++n)
        for (int t = 0; t < 10; ++t) {
            auto mu = dmtest::random_subunit_weights(rng, n + 2);
            auto arr = dm_arrangement(n, mu);
            EXPECT_EQ(bmy_defect(arr, arr.numeric_weights()), Rational(0));
        }
}

TEST(BmyDefect, NotKltPropagates) {
    auto arr = dm_arrangement(2, std::vector<Rational>{"2/5"_q, "2/5"_q, "2/5"_q, "1/10"_q});
    try {
        (void)bmy_defect(arr, arr.numeric_weights());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotKlt);
    }
}

TEST(PropForm, CompleteQuadrilateralKernelIsFourDimensional) {
    auto form = prop_form(complete_quadrilateral());
    EXPECT_EQ(form.variables.size(), 6u);
    EXPECT_TRUE(form.form.is_homogeneous_quadratic());
    EXPECT_TRUE(form.form.matrix().is_symmetric());
    auto k = kernel(form.form);
    EXPECT_EQ(k.dimension(), 4u);
    EXPECT_EQ(k.rank + k.dimension(), 6u);
    for (const auto& v : k.basis)
        for (const auto& x : form.form.matrix().apply(v)) EXPECT_TRUE(x.is_zero());
}

TEST(PropForm, DmFamilyLiesInKernel) {
    for (int n = 2; n <= 5; ++n) {
        auto form = prop_form(dm_arrangement(n));
        for (const auto& v : dm_family_basis(n))
            for (const auto& x : form.form.matrix().apply(v)) EXPECT_TRUE(x.is_zero()) << "n=" << n;
        auto k = kernel(form.form);
        EXPECT_GE(k.dimension(), static_cast<std::size_t>(n + 2));
    }
}

TEST(PropForm, AgreesWithNumericDefect) {
    std::mt19937_64 rng(12);
    std::vector<WeightedArrangement> arrangements{general_lines(1), general_lines(3), general_lines(5),
                                                  complete_quadrilateral(), dm_arrangement(3)};
    for (const auto& arr : arrangements) {
        auto s = expand_bmy_defect(arr);
        for (int t = 0; t < 20; ++t) {
            auto point = dmtest::random_subunit_weights(rng, static_cast<int>(arr.divisors.size()));
            for (auto& p : point) p = p * Rational(1, 3);
            EXPECT_EQ(s.form.evaluate(point), bmy_defect(arr, point));
        }
    }
}

TEST(PropForm, SingleLine) {
    auto s = prop_form(general_lines(1));
    EXPECT_EQ(s.form.evaluate(std::vector<Rational>{"1/3"_q}), Rational(-2) * "1/9"_q);
}

TEST(PropForm, NonHomogeneousIsReported) {
    WeightedArrangement arr = general_lines(2);
    arr.c2_ambient = 4; // not CP^2
    try {
        (void)prop_form(arr);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonHomogeneous);
    }
    EXPECT_THROW((void)kernel(expand_bmy_defect(arr).form), Error);
}

TEST(PropForm, RelabelingConjugatesTheMatrix) {
    std::mt19937_64 rng(4);
    auto base = complete_quadrilateral();
    auto form = prop_form(base).form;
    for (int t = 0; t < 10; ++t) {
        auto perm = dmtest::random_permutation(rng, 6);
        WeightedArrangement arr = base;
        for (std::size_t i = 0; i < 6; ++i) arr.divisors[static_cast<std::size_t>(perm[i] - 1)] = base.divisors[i];
        for (auto& s : arr.strata)
            for (auto& l : s.divisors) l = static_cast<std::size_t>(perm[l] - 1);
        auto permuted = prop_form(arr).form;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                EXPECT_EQ(permuted.matrix()(static_cast<std::size_t>(perm[i] - 1), static_cast<std::size_t>(perm[j] - 1)), form.matrix()(i, j));
        EXPECT_EQ(kernel(permuted).dimension(), 4u);
    }
}

TEST(Kernel, IdentityHasTrivialKernel) {
    QuadraticForm q(4);
    q = QuadraticForm(4);
    for (std::size_t i = 0; i < 4; ++i) q = q + QuadraticForm::variable(4, i) * QuadraticForm::variable(4, i);
    auto k = kernel(q);
    EXPECT_EQ(k.dimension(), 0u);
    EXPECT_EQ(k.rank, 4u);
}

TEST(Kernel, RandomLowRankForms) {
    // q = sum of r squares of random integer linear forms in 6 variables has
    // rank r generically; check dim + rank and exact annihilation.
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int r = 0; r <= 6; ++r) {
        QuadraticForm q(6);
        for (int k = 0; k < r; ++k) {
            QuadraticForm lin(6);
            for (std::size_t i = 0; i < 6; ++i) lin = lin + QuadraticForm::variable(6, i) * Rational(coef(rng));
            q = q + lin * lin;
        }
        auto k = kernel(q);
        EXPECT_EQ(k.rank + k.dimension(), 6u);
        EXPECT_LE(k.rank, static_cast<std::size_t>(r));
        for (const auto& v : k.basis)
            for (const auto& x : q.matrix().apply(v)) EXPECT_TRUE(x.is_zero());
    }
}

TEST(QuadraticForm, DegreeOverflowThrows) {
    auto x = QuadraticForm::variable(2, 0);
    EXPECT_THROW((void)(x * x * x), std::domain_error);
}

TEST(Arrangement, ValidationCatchesMissingIntersections) {
    auto arr = general_lines(3);
    arr.strata.pop_back();
    EXPECT_THROW(arr.validate(), Error);
    complete_quadrilateral().validate();
    general_lines(4).validate();
}
