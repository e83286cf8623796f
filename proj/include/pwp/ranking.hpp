#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pwp/errors.hpp"
#include "pwp/influence.hpp"
#include "pwp/network.hpp"

namespace pwp {

// Which of the three node scores derived from T: row sums (dependence E),
// column sums (influence F) or their sum (importance I).
enum class Kind { dependence, influence, importance };

inline const char* to_string(Kind k) {
    switch (k) {
        case Kind::dependence: return "dependence";
        case Kind::influence: return "influence";
        default: return "importance";
    }
}

struct ScoreVector {
    std::vector<std::pair<std::string, double>> scores;  // sorted by id
    Kind kind = Kind::importance;
};

// Ordered partition of an item set: tied blocks, best block first.
// Items are sorted inside each block.
struct Ranking {
    std::vector<std::vector<std::string>> blocks;

    std::size_t item_count() const {
        std::size_t n = 0;
        for (const auto& b : blocks) n += b.size();
        return n;
    }
};

inline constexpr double kDefaultRankTol = 1e-9;

inline ScoreVector node_scores(const InfluenceMatrix& infl, Kind kind) {
    const std::size_t n = infl.T.rows();
    ScoreVector out;
    out.kind = kind;
    out.scores.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += infl.T(i, j);
            col += infl.T(j, i);
        }
        double s = kind == Kind::dependence ? row
                 : kind == Kind::influence  ? col
                                            : row + col;
        out.scores.emplace_back(infl.index[i], s);
    }
    return out;
}

// Descending by score; scores whose gap is at most tol * max(1, |max score|)
// are merged into one tied block (transitive closure of near ties).
inline Ranking ranking_from_scores(const ScoreVector& sv, double tol = kDefaultRankTol) {
    if (tol < 0.0) throw ValidationError("ranking tolerance must be >= 0");
    Ranking r;
    if (sv.scores.empty()) return r;
    std::vector<std::pair<std::string, double>> items = sv.scores;
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    const double threshold = tol * std::max(1.0, std::abs(items.front().second));
    double block_floor = items.front().second;
    r.blocks.emplace_back();
    for (const auto& [id, score] : items) {
        if (!r.blocks.back().empty() && block_floor - score > threshold)
            r.blocks.emplace_back();
        r.blocks.back().push_back(id);
        block_floor = score;
    }
    for (auto& b : r.blocks) std::sort(b.begin(), b.end());
    return r;
}

inline Ranking rank_nodes(const Network& net, double lambda, Kind kind,
                          double tol = kDefaultRankTol) {
    return ranking_from_scores(node_scores(indirect_influences(net, lambda), kind), tol);
}

// Number of rankings (ordered set partitions) of an n-element set.
// a(n) = sum_{k=1..n} C(n,k) a(n-k); fits in 64 bits through n = 12.
inline std::int64_t count_rankings(int n) {
    if (n < 1 || n > 12) throw RangeError("count_rankings: n must be in 1..12");
    std::vector<std::int64_t> a(static_cast<std::size_t>(n) + 1, 0);
    a[0] = 1;
    for (int m = 1; m <= n; ++m) {
        std::int64_t binom = 1;  // C(m, k) built incrementally
        for (int k = 1; k <= m; ++k) {
            binom = binom * (m - k + 1) / k;
            a[static_cast<std::size_t>(m)] += binom * a[static_cast<std::size_t>(m - k)];
        }
    }
    return a[static_cast<std::size_t>(n)];
}

}  // namespace pwp
