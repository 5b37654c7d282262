#pragma once

// Deligne–Mostow weight systems: N = n+3 rational weights in (0,1) summing to 2.
// All indices handed in or out of this module are 1-based.

#include "dmcone/error.hpp"
#include "dmcone/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dmcone {

using IndexSet = std::vector<int>; // sorted, 1-based

class WeightSystem {
public:
    /// Checks length, range and sum; reports every violated condition.
    static WeightSystem validate(std::span<const Rational> raw) {
        std::vector<ErrorCode> problems;
        std::string detail;
        if (raw.size() < 4) {
            problems.push_back(ErrorCode::TooFewPoints);
            detail += "need at least 4 weights, got " + std::to_string(raw.size()) + "; ";
        }
        Rational sum(0);
        bool range_reported = false;
        for (std::size_t j = 0; j < raw.size(); ++j) {
            sum += raw[j];
            if ((raw[j] <= Rational(0) || raw[j] >= Rational(1)) && !range_reported) {
                problems.push_back(ErrorCode::WeightOutOfRange);
                detail += "mu_" + std::to_string(j + 1) + " = " + raw[j].str() + " not in (0,1); ";
                range_reported = true;
            }
        }
        if (sum != Rational(2)) {
            problems.push_back(ErrorCode::SumNotTwo);
            detail += "sum is " + sum.str() + "; ";
        }
        if (!problems.empty()) throw Error(std::move(problems), detail);
        WeightSystem w;
        w.mu_.assign(raw.begin(), raw.end());
        return w;
    }

    static WeightSystem validate(std::initializer_list<Rational> raw) {
        return validate(std::span<const Rational>(raw.begin(), raw.size()));
    }

    std::size_t size() const noexcept { return mu_.size(); }
    int dimension() const noexcept { return static_cast<int>(mu_.size()) - 3; }
    const std::vector<Rational>& mu() const noexcept { return mu_; }

    /// 1-based access.
    const Rational& operator[](int index) const { return mu_.at(static_cast<std::size_t>(index - 1)); }

    Rational sum_over(const IndexSet& block) const {
        Rational s(0);
        for (int i : block) s += (*this)[i];
        return s;
    }

    /// w' with w'[sigma[j]] = w[j]; sigma is a 1-based permutation image list.
    WeightSystem permuted(const std::vector<int>& sigma) const {
        std::vector<Rational> out(mu_.size());
        for (std::size_t j = 0; j < mu_.size(); ++j) out.at(static_cast<std::size_t>(sigma[j] - 1)) = mu_[j];
        return validate(out);
    }

    friend bool operator==(const WeightSystem&, const WeightSystem&) = default;

private:
    WeightSystem() = default;
    std::vector<Rational> mu_;
};

enum class SubsetClass { StableCollision, Polystable, Unstable };

constexpr const char* to_string(SubsetClass c) noexcept {
    switch (c) {
    case SubsetClass::StableCollision: return "StableCollision";
    case SubsetClass::Polystable: return "Polystable";
    case SubsetClass::Unstable: return "Unstable";
    }
    return "?";
}

inline SubsetClass subset_class(const WeightSystem& w, const IndexSet& block) {
    if (block.empty()) throw Error(ErrorCode::EmptySubset, "subset must be nonempty");
    for (int i : block)
        if (i < 1 || i > static_cast<int>(w.size()))
            throw Error(ErrorCode::InvalidArgument, "index " + std::to_string(i) + " out of range");
    auto s = w.sum_over(block);
    if (s < Rational(1)) return SubsetClass::StableCollision;
    if (s == Rational(1)) return SubsetClass::Polystable;
    return SubsetClass::Unstable;
}

/// Angles beta_j in (0,1), one per cone point.
struct AngleVector {
    std::vector<Rational> beta;

    static AngleVector make(std::vector<Rational> beta) {
        for (const auto& b : beta)
            if (b <= Rational(0) || b >= Rational(1))
                throw Error(ErrorCode::WeightOutOfRange, "cone angle " + b.str() + " not in (0,1)");
        return AngleVector{std::move(beta)};
    }
};

/// Spherical Troyanov conditions: total defect below 2 and each single defect
/// strictly smaller than the sum of the others.
inline bool troyanov_spherical(const AngleVector& angles) {
    Rational total(0);
    for (const auto& b : angles.beta) total += Rational(1) - b;
    if (total >= Rational(2)) return false;
    for (const auto& b : angles.beta) {
        Rational defect = Rational(1) - b;
        if (!(defect < total - defect)) return false;
    }
    return !angles.beta.empty();
}

} // namespace dmcone
