#pragma once

// Calabi-ansatz cone exponent and volume density of the Ricci-flat cone
// lifted from a conical Kähler–Einstein log Fano pair (X, sum (1-beta_j) D_j).
//
//   gamma = (I + sum_j d_j (beta_j - 1)) / (m (n+1))
//   nu    = (I/m) * ((I + sum_j d_j (beta_j - 1)) / I)^{n+1} * c_1(X)^n / (n+1)^{n+1}
//
// with L^I = K_X, the cone built on L^m and D_j in |-d_j L|.

#include "dmcone/error.hpp"
#include "dmcone/rational.hpp"
#include "dmcone/stratification.hpp"
#include "dmcone/weights.hpp"

#include <span>
#include <string>
#include <vector>

namespace dmcone {

struct ConeDivisor {
    int degree = 1;     // d_j
    Rational beta{1};   // cone angle 2*pi*beta_j, beta_j in (0,1]
};

struct LogFanoConeData {
    int n = 0;       // base complex dimension
    int index = 1;   // Fano index I
    int multiple = 1; // m
    std::vector<ConeDivisor> divisors;
    Rational c1n{1}; // c_1(X)^n

    void check() const {
        if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative base dimension");
        if (index < 1) throw Error(ErrorCode::InvalidArgument, "Fano index must be >= 1");
        if (multiple < 1) throw Error(ErrorCode::InvalidArgument, "polarization multiple must be >= 1");
        if (c1n <= Rational(0)) throw Error(ErrorCode::InvalidArgument, "c1^n must be positive");
        for (const auto& d : divisors) {
            if (d.degree < 1) throw Error(ErrorCode::InvalidArgument, "divisor degree must be >= 1");
            if (d.beta <= Rational(0) || d.beta > Rational(1))
                throw Error(ErrorCode::InvalidArgument, "divisor angle " + d.beta.str() + " not in (0,1]");
        }
    }
};

struct DensityValue {
    Rational gamma;
    Rational nu;
};

namespace detail {
// I + sum_j d_j (beta_j - 1)
inline Rational effective_index(const LogFanoConeData& data) {
    Rational s(data.index);
    for (const auto& d : data.divisors) s += Rational(d.degree) * (d.beta - Rational(1));
    return s;
}
} // namespace detail

inline Rational gamma(const LogFanoConeData& data) {
    data.check();
    Rational e = detail::effective_index(data);
    if (e <= Rational(0)) throw Error(ErrorCode::NotKlt, "gamma = " + e.str() + "/(m(n+1)) is not positive");
    return e / Rational(static_cast<long long>(data.multiple) * (data.n + 1));
}

inline DensityValue volume_density(const LogFanoConeData& data) {
    Rational g = gamma(data);
    Rational ratio = detail::effective_index(data) / Rational(data.index);
    Rational nu = Rational(data.index) / Rational(data.multiple) * pow(ratio, static_cast<unsigned>(data.n + 1)) * data.c1n /
                  pow(Rational(data.n + 1), static_cast<unsigned>(data.n + 1));
    return {g, nu};
}

/// CP^d with no divisors: the flat cone C^{d+1}.
inline LogFanoConeData projective_space(int d) {
    LogFanoConeData data;
    data.n = d;
    data.index = d + 1;
    data.multiple = 1;
    data.c1n = pow(Rational(d + 1), static_cast<unsigned>(d));
    return data;
}

/// CP^d with the arrangement H_ij (i<j over d+2 points in general position)
/// at angles beta_ij = 1 - mu_i - mu_j.
inline LogFanoConeData cpd_arrangement(int d, std::span<const Rational> mu) {
    if (d < 0 || mu.size() != static_cast<std::size_t>(d + 2))
        throw Error(ErrorCode::InvalidArgument, "CP^d arrangement needs exactly d+2 weights");
    LogFanoConeData data = projective_space(d);
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = i + 1; j < mu.size(); ++j)
            data.divisors.push_back({1, Rational(1) - mu[i] - mu[j]});
    return data;
}

/// Both density routes for a stable partition must agree exactly: the
/// stratification product formula, and the Calabi-ansatz density of each
/// block's CP^{|B|-2} arrangement multiplied over blocks.
inline bool crosscheck_stratum_density(const WeightSystem& w, const Partition& p) {
    const Rational product_formula = tangent_cone(w, p).total_density;
    Rational via_cones(1);
    for (const auto& block : p.blocks()) {
        if (block.size() < 2) continue;
        std::vector<Rational> mu;
        for (int i : block) mu.push_back(w[i]);
        via_cones *= volume_density(cpd_arrangement(static_cast<int>(block.size()) - 2, mu)).nu;
    }
    return product_formula == via_cones;
}

} // namespace dmcone
