#pragma once

// Logarithmic Chern numbers of weighted divisor arrangements and the BMY
// defect 2(n+1) c_2(X,D) - n c_1(X,D)^2, numerically and as an exact
// quadratic form in the divisor weights.
//
// Cohomology is normalized by a single ample class h (hyperplane class for
// projective space): divisor classes are multiples deg_l * h and top-degree
// products are paired with h^{n-2}. Divisor D_l carries weight mu_l and cone
// angle beta_l = 1 - mu_l.

#include "dmcone/error.hpp"
#include "dmcone/exact_linalg.hpp"
#include "dmcone/quadratic_form.hpp"
#include "dmcone/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dmcone {

enum class StratumType { DoublePoint, MultiplePoint };

constexpr const char* to_string(StratumType t) noexcept {
    return t == StratumType::DoublePoint ? "double" : "multiple";
}

struct ArrangementDivisor {
    std::string name;
    std::optional<Rational> weight;          // nullopt: symbolic
    Rational degree{1};                      // class in units of h
    std::optional<Rational> anticanonical;   // -K_X . D_l . h^{n-2}; default c1(X) * degree
    std::optional<Rational> self_intersection; // D_l^2 . h^{n-2}; default degree^2
};

struct Codim2Stratum {
    std::vector<std::size_t> divisors; // 0-based positions in the divisor list
    StratumType type = StratumType::DoublePoint;
    Rational cls{1};                   // [S] . h^{n-2}
};

struct WeightedArrangement {
    int n = 2;
    Rational c1_ambient{3}; // c_1(X) in units of h
    Rational c2_ambient{3}; // c_2(X) . h^{n-2}
    std::vector<ArrangementDivisor> divisors;
    std::vector<Codim2Stratum> strata;

    Rational anticanonical(std::size_t l) const {
        const auto& d = divisors.at(l);
        return d.anticanonical ? *d.anticanonical : c1_ambient * d.degree;
    }
    Rational self_intersection(std::size_t l) const {
        const auto& d = divisors.at(l);
        return d.self_intersection ? *d.self_intersection : d.degree * d.degree;
    }

    std::optional<std::size_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < divisors.size(); ++i)
            if (divisors[i].name == name) return i;
        return std::nullopt;
    }

    bool is_projective_plane_lines() const {
        if (n != 2 || c1_ambient != Rational(3) || c2_ambient != Rational(3)) return false;
        return std::all_of(divisors.begin(), divisors.end(), [](const auto& d) {
            return d.degree == Rational(1) && !d.anticanonical && !d.self_intersection;
        });
    }

    /// Structural checks: incidence sizes, index ranges, and for lines in CP^2
    /// that every pair of lines meets in exactly one listed point.
    void validate() const {
        if (n < 1) throw Error(ErrorCode::InvalidArgument, "ambient dimension must be >= 1");
        std::set<std::string> names;
        for (const auto& d : divisors)
            if (!names.insert(d.name).second) throw Error(ErrorCode::InvalidArgument, "duplicate divisor name " + d.name);
        for (const auto& s : strata) {
            if (s.divisors.size() < 2) throw Error(ErrorCode::UnsupportedStratum, "codim-2 stratum needs at least two divisors");
            std::set<std::size_t> uniq(s.divisors.begin(), s.divisors.end());
            if (uniq.size() != s.divisors.size()) throw Error(ErrorCode::InvalidArgument, "repeated divisor in stratum");
            for (auto l : s.divisors)
                if (l >= divisors.size()) throw Error(ErrorCode::InvalidArgument, "stratum refers to unknown divisor");
            if (s.type == StratumType::DoublePoint && s.divisors.size() != 2)
                throw Error(ErrorCode::UnsupportedStratum, "a double point lies on exactly two divisors");
            if (s.type == StratumType::MultiplePoint && s.divisors.size() < 3)
                throw Error(ErrorCode::UnsupportedStratum, "a multiple point lies on at least three divisors");
            if (s.cls <= Rational(0)) throw Error(ErrorCode::InvalidArgument, "stratum class must be positive");
        }
        if (is_projective_plane_lines()) {
            std::map<std::pair<std::size_t, std::size_t>, int> cover;
            for (const auto& s : strata)
                for (std::size_t a = 0; a < s.divisors.size(); ++a)
                    for (std::size_t b = a + 1; b < s.divisors.size(); ++b)
                        ++cover[std::minmax(s.divisors[a], s.divisors[b])];
            for (std::size_t a = 0; a < divisors.size(); ++a)
                for (std::size_t b = a + 1; b < divisors.size(); ++b)
                    if (cover[{a, b}] != 1)
                        throw Error(ErrorCode::InvalidArgument, "lines " + divisors[a].name + " and " + divisors[b].name +
                                                                    " must meet in exactly one listed point");
        }
    }

    std::vector<Rational> numeric_weights() const {
        std::vector<Rational> mu;
        for (const auto& d : divisors) {
            if (!d.weight) throw Error(ErrorCode::InvalidArgument, "divisor " + d.name + " has a symbolic weight");
            mu.push_back(*d.weight);
        }
        return mu;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& d : divisors) out.push_back(d.name);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Formula layer, generic over the scalar (Rational for values, QuadraticForm
// for the symbolic expansion).

namespace detail {

template <class T>
T from_rational(const Rational& r, std::size_t n_vars) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)n_vars;
        return r;
    } else {
        return T(n_vars, r);
    }
}

template <class T>
std::size_t var_count(std::span<const T> mu) {
    if constexpr (std::is_same_v<T, Rational>) return 0;
    else return mu.empty() ? 0 : mu.front().variable_count();
}

template <class T>
T c1_log(const WeightedArrangement& arr, std::span<const T> mu) {
    const auto nv = var_count(mu);
    T c1 = from_rational<T>(arr.c1_ambient, nv);
    for (std::size_t l = 0; l < arr.divisors.size(); ++l) c1 = c1 - mu[l] * arr.divisors[l].degree;
    return c1;
}

// Density at a generic point of a codim-2 stratum. Transverse double point:
// product of the two angles. k >= 3 hyperplanes through a common codim-2
// locus: the transverse slice is k lines through the origin, whose PK
// tangent cone has density gamma^2 with 2 gamma = 2 + sum (beta_j - 1).
template <class T>
T codim2_density(StratumType type, std::span<const T> betas, std::size_t nv) {
    if (type == StratumType::DoublePoint) {
        if (betas.size() != 2) throw Error(ErrorCode::UnsupportedStratum, "double point needs two angles");
        return betas[0] * betas[1];
    }
    if (betas.size() < 3) throw Error(ErrorCode::UnsupportedStratum, "multiple point needs at least three angles");
    T two_gamma = from_rational<T>(2, nv);
    for (const auto& b : betas) two_gamma = two_gamma + (b - Rational(1));
    T g = two_gamma * Rational(1, 2);
    return g * g;
}

template <class T>
T c2_log(const WeightedArrangement& arr, std::span<const T> mu) {
    const auto nv = var_count(mu);
    T c2 = from_rational<T>(arr.c2_ambient, nv);
    // sum_j (beta_j - 1)(-K.D_j - D_j^2) with beta_j - 1 = -mu_j
    for (std::size_t l = 0; l < arr.divisors.size(); ++l)
        c2 = c2 - mu[l] * (arr.anticanonical(l) - arr.self_intersection(l));
    for (const auto& s : arr.strata) {
        std::vector<T> betas;
        T correction = from_rational<T>(1, nv);
        for (auto l : s.divisors) {
            betas.push_back(Rational(1) - mu[l]);
            correction = correction - mu[l];
        }
        T nu = codim2_density<T>(s.type, betas, nv);
        c2 = c2 + (nu - correction) * s.cls;
    }
    return c2;
}

template <class T>
T bmy_defect(const WeightedArrangement& arr, std::span<const T> mu) {
    T c1 = c1_log<T>(arr, mu);
    T c2 = c2_log<T>(arr, mu);
    return c2 * Rational(2 * (arr.n + 1)) - (c1 * c1) * Rational(arr.n);
}

inline void check_weights(const WeightedArrangement& arr, std::span<const Rational> mu) {
    if (mu.size() != arr.divisors.size())
        throw Error(ErrorCode::InvalidArgument, "expected one weight per divisor (" + std::to_string(arr.divisors.size()) + ")");
    for (const auto& m : mu)
        if (m <= Rational(0) || m >= Rational(1))
            throw Error(ErrorCode::WeightOutOfRange, "divisor weight " + m.str() + " not in (0,1)");
}

inline void check_klt(const WeightedArrangement& arr, std::span<const Rational> mu) {
    for (const auto& s : arr.strata) {
        std::vector<Rational> betas;
        for (auto l : s.divisors) betas.push_back(Rational(1) - mu[l]);
        if (s.type == StratumType::MultiplePoint) {
            Rational two_gamma(2);
            for (const auto& b : betas) two_gamma += b - Rational(1);
            if (two_gamma <= Rational(0)) throw Error(ErrorCode::NotKlt, "multiple point with gamma <= 0");
        }
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Numeric entry points.

/// Density of a transverse double point (beta_1 beta_2) or of a multiple
/// point of k >= 3 lines (gamma^2, 2 gamma = 2 + sum (beta_j - 1)).
inline Rational codim2_density(StratumType type, std::span<const Rational> betas) {
    Rational nu = detail::codim2_density<Rational>(type, betas, 0);
    if (type == StratumType::MultiplePoint) {
        Rational two_gamma(2);
        for (const auto& b : betas) two_gamma += b - Rational(1);
        if (two_gamma <= Rational(0)) throw Error(ErrorCode::NotKlt, "gamma <= 0 at multiple point");
    } else if (nu <= Rational(0)) {
        throw Error(ErrorCode::NotKlt, "non-positive double point density");
    }
    return nu;
}

inline Rational c1_log(const WeightedArrangement& arr, std::span<const Rational> mu) {
    detail::check_weights(arr, mu);
    return detail::c1_log<Rational>(arr, mu);
}

inline Rational c2_log(const WeightedArrangement& arr, std::span<const Rational> mu) {
    detail::check_weights(arr, mu);
    detail::check_klt(arr, mu);
    return detail::c2_log<Rational>(arr, mu);
}

inline Rational bmy_defect(const WeightedArrangement& arr, std::span<const Rational> mu) {
    detail::check_weights(arr, mu);
    detail::check_klt(arr, mu);
    return detail::bmy_defect<Rational>(arr, mu);
}

// ---------------------------------------------------------------------------
// Symbolic layer.

struct SymbolicForm {
    std::vector<std::string> variables;
    QuadraticForm form;
};

/// Full expansion of the defect in the divisor weights, with no homogeneity
/// requirement.
inline SymbolicForm expand_bmy_defect(const WeightedArrangement& arr) {
    const std::size_t nv = arr.divisors.size();
    std::vector<QuadraticForm> mu;
    for (std::size_t l = 0; l < nv; ++l) mu.push_back(QuadraticForm::variable(nv, l));
    return {arr.names(), detail::bmy_defect<QuadraticForm>(arr, mu)};
}

/// The defect as a homogeneous quadratic form; NonHomogeneous if constant or
/// linear terms survive the expansion.
inline SymbolicForm prop_form(const WeightedArrangement& arr) {
    auto s = expand_bmy_defect(arr);
    if (!s.form.is_homogeneous_quadratic())
        throw Error(ErrorCode::NonHomogeneous, "constant term " + s.form.constant().str() +
                                                   (s.form.has_linear() ? " and nonzero linear part" : "") +
                                                   " survive in the expanded defect");
    return s;
}

inline NullspaceResult kernel(const QuadraticForm& q) {
    if (!q.is_homogeneous_quadratic())
        throw Error(ErrorCode::NonHomogeneous, "kernel is defined for homogeneous quadratic forms only");
    return nullspace(q.matrix());
}

// ---------------------------------------------------------------------------
// Presets.

inline std::string hyperplane_name(int i, int j, int points) {
    return points <= 9 ? "H" + std::to_string(i) + std::to_string(j) : "H" + std::to_string(i) + "_" + std::to_string(j);
}

/// CP^n with the n+2 points in general position and the C(n+2,2) hyperplanes
/// H_ij spanned by all points except v_i, v_j. Codim-2 strata: H_ij ∩ H_kl
/// for disjoint pairs (double), H_ij ∩ H_ik ∩ H_jk (triple). If point
/// weights are given, divisor weights are mu_ij = mu_i + mu_j.
inline WeightedArrangement dm_arrangement(int n, std::optional<std::vector<Rational>> point_weights = std::nullopt) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
    const int points = n + 2;
    if (point_weights && point_weights->size() != static_cast<std::size_t>(points))
        throw Error(ErrorCode::InvalidArgument, "DM preset needs n+2 point weights");
    WeightedArrangement arr;
    arr.n = n;
    arr.c1_ambient = n + 1;
    arr.c2_ambient = binomial(static_cast<unsigned>(n + 1), 2);
    std::map<std::pair<int, int>, std::size_t> index;
    for (int i = 1; i <= points; ++i)
        for (int j = i + 1; j <= points; ++j) {
            index[{i, j}] = arr.divisors.size();
            ArrangementDivisor d;
            d.name = hyperplane_name(i, j, points);
            if (point_weights) d.weight = (*point_weights)[static_cast<std::size_t>(i - 1)] + (*point_weights)[static_cast<std::size_t>(j - 1)];
            arr.divisors.push_back(std::move(d));
        }
    if (n >= 2) {
        for (int i = 1; i <= points; ++i)
            for (int j = i + 1; j <= points; ++j)
                for (int k = i + 1; k <= points; ++k)
                    for (int l = k + 1; l <= points; ++l) {
                        if (k == j || l == j) continue;
                        arr.strata.push_back({{index[{i, j}], index[{k, l}]}, StratumType::DoublePoint, 1});
                    }
        for (int i = 1; i <= points; ++i)
            for (int j = i + 1; j <= points; ++j)
                for (int k = j + 1; k <= points; ++k)
                    arr.strata.push_back({{index[{i, j}], index[{i, k}], index[{j, k}]}, StratumType::MultiplePoint, 1});
    }
    return arr;
}

/// Six lines through four general points of CP^2: four triple points and
/// three double points.
inline WeightedArrangement complete_quadrilateral() { return dm_arrangement(2); }

/// k lines in general position in CP^2 (only double points).
inline WeightedArrangement general_lines(int k) {
    WeightedArrangement arr;
    arr.n = 2;
    arr.c1_ambient = 3;
    arr.c2_ambient = 3;
    for (int i = 1; i <= k; ++i) arr.divisors.push_back({"L" + std::to_string(i), std::nullopt, 1, std::nullopt, std::nullopt});
    for (std::size_t a = 0; a < static_cast<std::size_t>(k); ++a)
        for (std::size_t b = a + 1; b < static_cast<std::size_t>(k); ++b)
            arr.strata.push_back({{a, b}, StratumType::DoublePoint, 1});
    return arr;
}

/// Basis of the (n+2)-parameter family mu_ij = mu_i + mu_j, expressed in the
/// divisor coordinates of dm_arrangement(n).
inline std::vector<std::vector<Rational>> dm_family_basis(int n) {
    const int points = n + 2;
    std::vector<std::vector<Rational>> basis;
    for (int k = 1; k <= points; ++k) {
        std::vector<Rational> v;
        for (int i = 1; i <= points; ++i)
            for (int j = i + 1; j <= points; ++j) v.push_back(Rational((i == k) + (j == k)));
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace dmcone
