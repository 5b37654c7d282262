#pragma once

// Boundary strata, polystable cusp points and tangent-cone descriptors of the
// compactified moduli space X of weighted ordered points on the projective line.

#include "dmcone/error.hpp"
#include "dmcone/rational.hpp"
#include "dmcone/weights.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace dmcone {

/// Set partition of {1..N}. Canonical form: blocks sorted internally and
/// ordered by their smallest element.
class Partition {
public:
    Partition() = default;

    static Partition make(std::vector<IndexSet> blocks, int ground_size) {
        std::vector<int> seen(static_cast<std::size_t>(ground_size) + 1, 0);
        for (auto& b : blocks) {
            if (b.empty()) throw Error(ErrorCode::InvalidArgument, "empty block in partition");
            std::sort(b.begin(), b.end());
            for (int i : b) {
                if (i < 1 || i > ground_size) throw Error(ErrorCode::InvalidArgument, "index out of range in partition");
                if (seen[static_cast<std::size_t>(i)]++) throw Error(ErrorCode::InvalidArgument, "blocks overlap");
            }
        }
        for (int i = 1; i <= ground_size; ++i)
            if (!seen[static_cast<std::size_t>(i)]) throw Error(ErrorCode::InvalidArgument, "partition does not cover index " + std::to_string(i));
        std::sort(blocks.begin(), blocks.end());
        Partition p;
        p.blocks_ = std::move(blocks);
        p.ground_ = ground_size;
        return p;
    }

    /// The partition with the given non-singleton blocks, padded with singletons.
    static Partition with_singletons(std::vector<IndexSet> blocks, int ground_size) {
        std::vector<int> used(static_cast<std::size_t>(ground_size) + 1, 0);
        for (const auto& b : blocks)
            for (int i : b)
                if (i >= 1 && i <= ground_size) used[static_cast<std::size_t>(i)] = 1;
        for (int i = 1; i <= ground_size; ++i)
            if (!used[static_cast<std::size_t>(i)]) blocks.push_back({i});
        return make(std::move(blocks), ground_size);
    }

    const std::vector<IndexSet>& blocks() const noexcept { return blocks_; }
    int ground_size() const noexcept { return ground_; }
    int size() const noexcept { return static_cast<int>(blocks_.size()); }

    std::string str() const {
        std::string s;
        for (const auto& b : blocks_) {
            s += "{";
            for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
            s += "}";
        }
        return s;
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition& a, const Partition& b) { return a.blocks_ <=> b.blocks_; }

private:
    std::vector<IndexSet> blocks_;
    int ground_ = 0;
};

enum class StratumKind { Interior, StableStratum, CuspPoint };

constexpr const char* to_string(StratumKind k) noexcept {
    switch (k) {
    case StratumKind::Interior: return "Interior";
    case StratumKind::StableStratum: return "StableStratum";
    case StratumKind::CuspPoint: return "CuspPoint";
    }
    return "?";
}

struct SegreCone {
    int p = 0;
    int q = 0;
    friend bool operator==(const SegreCone&, const SegreCone&) = default;
};

/// Local model at a polystable point: smooth, or the affine cone over the
/// Segre embedding of CP^p x CP^q.
struct CuspModel {
    bool smooth = true;
    SegreCone segre{};

    std::string str() const {
        return smooth ? std::string("SmoothPoint")
                      : "SegreCone(" + std::to_string(segre.p) + "," + std::to_string(segre.q) + ")";
    }
    friend bool operator==(const CuspModel&, const CuspModel&) = default;
};

struct StratumDescriptor {
    Partition partition;
    int codim = 0;
    StratumKind kind = StratumKind::Interior;
    std::optional<CuspModel> cusp_model;
};

struct ConeFactor {
    IndexSet block;
    Rational density;
};

struct TangentConeDescriptor {
    std::vector<ConeFactor> factors;
    int flat_factor_dim = 0;
    Rational total_density{1};
};

namespace detail {

inline void require_stable(const WeightSystem& w, const Partition& p) {
    for (const auto& b : p.blocks())
        if (w.sum_over(b) >= Rational(1))
            throw Error(ErrorCode::NotStable, "block sum of " + p.str() + " reaches 1");
}

// Restricted-growth walk over set partitions. A block is only extended while
// its weight sum stays below 1 and the number of merges stays within budget.
inline void walk_stable(const WeightSystem& w, int next, int merges, int max_merges,
                        std::vector<IndexSet>& blocks, std::vector<Rational>& sums,
                        std::vector<Partition>& out) {
    const int n_points = static_cast<int>(w.size());
    if (next > n_points) {
        if (merges >= 1) out.push_back(Partition::make(blocks, n_points));
        return;
    }
    const Rational& mu = w[next];
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (merges + 1 > max_merges) break;
        Rational s = sums[b] + mu;
        if (s >= Rational(1)) continue;
        blocks[b].push_back(next);
        std::swap(sums[b], s);
        walk_stable(w, next + 1, merges + 1, max_merges, blocks, sums, out);
        std::swap(sums[b], s);
        blocks[b].pop_back();
    }
    blocks.push_back({next});
    sums.push_back(mu);
    walk_stable(w, next + 1, merges, max_merges, blocks, sums, out);
    blocks.pop_back();
    sums.pop_back();
}

} // namespace detail

/// Stable boundary strata X^P of codimension 1..max_codim, lexicographic in the
/// canonical block list.
inline std::vector<StratumDescriptor> enumerate_strata(const WeightSystem& w, int max_codim) {
    const int n = w.dimension();
    if (max_codim < 1 || max_codim > n)
        throw Error(ErrorCode::InvalidArgument, "max_codim must lie in [1, " + std::to_string(n) + "]");
    std::vector<Partition> parts;
    std::vector<IndexSet> blocks;
    std::vector<Rational> sums;
    detail::walk_stable(w, 1, 0, max_codim, blocks, sums, parts);
    std::sort(parts.begin(), parts.end());
    std::vector<StratumDescriptor> out;
    out.reserve(parts.size());
    for (auto& p : parts) {
        int codim = static_cast<int>(w.size()) - p.size();
        out.push_back(StratumDescriptor{std::move(p), codim, StratumKind::StableStratum, std::nullopt});
    }
    return out;
}

/// Strictly polystable points: unordered splits B1|B2 with both sums equal to 1.
inline std::vector<StratumDescriptor> enumerate_cusps(const WeightSystem& w) {
    const int n_points = static_cast<int>(w.size());
    std::vector<StratumDescriptor> out;
    // B1 always contains index 1, which makes each unordered split appear once.
    IndexSet b1{1};
    auto recurse = [&](auto&& self, int next, const Rational& sum) -> void {
        if (sum == Rational(1)) {
            IndexSet b2;
            for (int i = 1; i <= n_points; ++i)
                if (!std::binary_search(b1.begin(), b1.end(), i)) b2.push_back(i);
            if (b2.empty()) return;
            CuspModel model;
            if (b1.size() == 2 || b2.size() == 2) {
                model.smooth = true;
            } else {
                model.smooth = false;
                model.segre = {static_cast<int>(b1.size()) - 2, static_cast<int>(b2.size()) - 2};
            }
            auto part = Partition::make({b1, b2}, n_points);
            // A polystable point is zero dimensional.
            out.push_back(StratumDescriptor{part, w.dimension(), StratumKind::CuspPoint, model});
            return;
        }
        for (int i = next; i <= n_points; ++i) {
            Rational s = sum + w[i];
            if (s > Rational(1)) continue;
            b1.push_back(i);
            self(self, i + 1, s);
            b1.pop_back();
        }
    };
    recurse(recurse, 2, w[1]);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.partition < b.partition; });
    return out;
}

/// Tangent cone (prod_alpha g_alpha) x C^{|P|-3} at a point of X^P, with
/// density prod_alpha (1 - s_alpha)^{|B_alpha|-1}.
inline TangentConeDescriptor tangent_cone(const WeightSystem& w, const Partition& p) {
    if (p.ground_size() != static_cast<int>(w.size()))
        throw Error(ErrorCode::InvalidArgument, "partition ground set does not match weight system");
    detail::require_stable(w, p);
    TangentConeDescriptor cone;
    cone.flat_factor_dim = p.size() - 3;
    for (const auto& b : p.blocks()) {
        if (b.size() < 2) continue;
        Rational d = pow(Rational(1) - w.sum_over(b), static_cast<unsigned>(b.size() - 1));
        cone.total_density *= d;
        cone.factors.push_back({b, d});
    }
    return cone;
}

/// Generic point of D_ij ∩ D_kl: C_{1-mu_i-mu_j} x C_{1-mu_k-mu_l} x C^{n-2}.
inline TangentConeDescriptor codim2_cone(const WeightSystem& w, IndexSet first, IndexSet second) {
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    if (first.size() != 2 || second.size() != 2)
        throw Error(ErrorCode::InvalidArgument, "codim2_cone expects two index pairs");
    for (int i : first)
        if (std::binary_search(second.begin(), second.end(), i))
            throw Error(ErrorCode::InvalidArgument, "index pairs must be disjoint");
    for (const auto* pair : {&first, &second})
        if (w.sum_over(*pair) >= Rational(1))
            throw Error(ErrorCode::NotStable, "pair weight sum reaches 1");
    TangentConeDescriptor cone;
    cone.flat_factor_dim = w.dimension() - 2;
    for (const auto* pair : {&first, &second}) {
        Rational d = Rational(1) - w.sum_over(*pair);
        cone.total_density *= d;
        cone.factors.push_back({*pair, d});
    }
    if (first > second) std::swap(cone.factors[0], cone.factors[1]);
    return cone;
}

} // namespace dmcone
