#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pwp/constructions.hpp"
#include "pwp/errors.hpp"
#include "pwp/influence.hpp"
#include "pwp/network.hpp"
#include "pwp/ranking.hpp"

namespace pwp {

enum class LinkMethod { dual, barycentric, bridge };

inline const char* to_string(LinkMethod m) {
    switch (m) {
        case LinkMethod::dual: return "dual";
        case LinkMethod::barycentric: return "barycentric";
        default: return "bridge";
    }
}

struct LinkScoreVector {
    std::vector<std::pair<std::string, double>> scores;  // edge id -> score, sorted by id
    LinkMethod method = LinkMethod::bridge;
    Kind kind = Kind::importance;
};

namespace detail {

inline std::vector<std::pair<std::string, double>> pull_back_to_edges(
        const Network& net, const TaggedNetwork& derived, const ScoreVector& sv) {
    std::map<std::string, double> by_new_id;
    for (const auto& [id, s] : sv.scores) by_new_id.emplace(id, s);
    std::map<std::string, double> by_edge;
    for (const auto& [new_id, origin] : derived.origin)
        if (origin.kind == Origin::Kind::edge)
            by_edge.emplace(origin.id, by_new_id.at(new_id));
    std::vector<std::pair<std::string, double>> out;
    out.reserve(net.edge_count());
    for (const Edge& e : net.edges()) out.emplace_back(e.id, by_edge.at(e.id));
    return out;
}

}  // namespace detail

// Scores each link by scoring the nodes of the dual network and pulling the
// values back through the origin map.
inline LinkScoreVector link_scores_dual(const Network& net, Kind kind, double lambda) {
    TaggedNetwork d = dual(net);
    ScoreVector sv = node_scores(indirect_influences(d.network, lambda), kind);
    return {detail::pull_back_to_edges(net, d, sv), LinkMethod::dual, kind};
}

// Scores of the edge-nodes of the barycentric division.
inline LinkScoreVector link_scores_barycentric(const Network& net, Kind kind, double lambda) {
    TaggedNetwork b = barycentric(net);
    ScoreVector sv = node_scores(indirect_influences(b.network, lambda), kind);
    return {detail::pull_back_to_edges(net, b, sv), LinkMethod::barycentric, kind};
}

// Bridge approach: a link is scored from the lands it joins,
//   dependence(e) = E(s e) f(s e),  influence(e) = w(e) F(t e),
//   importance(e) = their sum,
// with E, F the node scores of the original network.
inline LinkScoreVector link_scores_bridge(const Network& net, Kind kind, double lambda) {
    InfluenceMatrix infl = indirect_influences(net, lambda);
    ScoreVector dep = node_scores(infl, Kind::dependence);
    ScoreVector inf = node_scores(infl, Kind::influence);
    LinkScoreVector out;
    out.method = LinkMethod::bridge;
    out.kind = kind;
    out.scores.reserve(net.edge_count());
    for (const Edge& e : net.edges()) {
        const double d = dep.scores[net.node_index(e.source)].second * net.node(e.source).weight;
        const double f = e.weight * inf.scores[net.node_index(e.target)].second;
        const double s = kind == Kind::dependence ? d : kind == Kind::influence ? f : d + f;
        out.scores.emplace_back(e.id, s);
    }
    return out;
}

inline LinkScoreVector link_scores(const Network& net, LinkMethod method, Kind kind,
                                   double lambda) {
    switch (method) {
        case LinkMethod::dual: return link_scores_dual(net, kind, lambda);
        case LinkMethod::barycentric: return link_scores_barycentric(net, kind, lambda);
        default: return link_scores_bridge(net, kind, lambda);
    }
}

// Full ranking of the barycentric division's nodes (original nodes and links
// on the same footing); items carry the "node:"/"edge:" tagged ids.
inline Ranking barycentric_mixed_ranking(const Network& net, Kind kind, double lambda,
                                         double tol = kDefaultRankTol) {
    TaggedNetwork b = barycentric(net);
    return ranking_from_scores(node_scores(indirect_influences(b.network, lambda), kind), tol);
}

// Restriction map: keep only edge items (relabelled to original edge ids),
// preserving block order and ties, dropping emptied blocks.
inline Ranking restrict_to_edges(const Ranking& mixed, const TaggedNetwork& derived) {
    Ranking out;
    for (const auto& block : mixed.blocks) {
        std::vector<std::string> kept;
        for (const auto& id : block) {
            auto it = derived.origin.find(id);
            if (it != derived.origin.end() && it->second.kind == Origin::Kind::edge)
                kept.push_back(it->second.id);
        }
        if (!kept.empty()) {
            std::sort(kept.begin(), kept.end());
            out.blocks.push_back(std::move(kept));
        }
    }
    return out;
}

inline Ranking rank_links(const Network& net, LinkMethod method, Kind kind, double lambda,
                          double tol = kDefaultRankTol) {
    if (method == LinkMethod::barycentric) {
        // restriction of the mixed ranking, not a re-ranking of scores
        TaggedNetwork b = barycentric(net);
        Ranking mixed = ranking_from_scores(
                node_scores(indirect_influences(b.network, lambda), kind), tol);
        return restrict_to_edges(mixed, b);
    }
    ScoreVector sv;
    sv.kind = kind;
    sv.scores = link_scores(net, method, kind, lambda).scores;
    return ranking_from_scores(sv, tol);
}

namespace detail {

// Concatenable edge sequences e_0 = f, ..., e_k = e with t(e_i) = s(e_{i+1});
// shared enumeration core of the two construction theorems. The per-step
// factor is w(e_i) f(t e_i); the length-k weight differs per theorem.
template <typename LengthCoef>
InfluenceMatrix edge_path_series(const Network& net, double lambda, int max_steps,
                                 std::uint64_t path_budget, LengthCoef&& coef) {
    if (!std::isfinite(lambda)) throw NonFiniteInput("non-finite lambda");
    if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
    if (max_steps < 1) throw ValidationError("max_steps must be >= 1");
    // k concatenation steps involve k+1 edges
    if (count_edge_paths(net, max_steps + 1, path_budget) > path_budget)
        throw OracleBudgetExceeded("edge-path enumeration exceeds budget of " +
                                   std::to_string(path_budget) + " paths");

    const std::size_t m = net.edge_count();
    InfluenceMatrix out{Matrix(m, m), lambda, {}};
    out.index.reserve(m);
    for (const Edge& e : net.edges()) out.index.push_back(e.id);

    const auto out_edges = out_edges_by_node(net);
    struct Frame {
        std::size_t edge;
        int steps;
        double prod;
    };
    std::vector<Frame> stack;
    for (std::size_t start = 0; start < m; ++start) {
        stack.push_back({start, 0, 1.0});
        while (!stack.empty()) {
            Frame fr = stack.back();
            stack.pop_back();
            if (fr.steps > 0) out.T(fr.edge, start) += fr.prod * coef(fr.steps);
            if (fr.steps == max_steps) continue;
            const Edge& last = net.edges()[fr.edge];
            const double factor = last.weight * net.node(last.target).weight;
            for (std::size_t h : out_edges[net.node_index(last.target)])
                stack.push_back({h, fr.steps + 1, fr.prod * factor});
        }
    }
    return out;
}

}  // namespace detail

// Closed form of the indirect influences on the dual network, by direct
// enumeration: k concatenation steps weigh lambda^k / ((e^lambda - 1) k!).
inline InfluenceMatrix dual_influence_series(const Network& net, double lambda, int max_steps,
                                             std::uint64_t path_budget = 4'000'000) {
    std::vector<double> coef(static_cast<std::size_t>(max_steps) + 1, 0.0);
    if (lambda == 0.0) {
        coef[1] = 1.0;
    } else {
        const double denom = std::expm1(lambda);
        double pf = 1.0;
        for (int k = 1; k <= max_steps; ++k) {
            pf *= lambda / k;
            coef[static_cast<std::size_t>(k)] = pf / denom;
        }
    }
    return detail::edge_path_series(net, lambda, max_steps, path_budget,
                                    [&coef](int k) { return coef[static_cast<std::size_t>(k)]; });
}

// Closed form on the barycentric division: original paths double in length,
// so k concatenation steps weigh lambda^{2k} / ((e^lambda - 1) (2k)!).
inline InfluenceMatrix barycentric_influence_series(const Network& net, double lambda,
                                                    int max_steps,
                                                    std::uint64_t path_budget = 4'000'000) {
    std::vector<double> coef(static_cast<std::size_t>(max_steps) + 1, 0.0);
    if (lambda > 0.0) {
        const double denom = std::expm1(lambda);
        double pf = 1.0;  // lambda^{2k} / (2k)!
        for (int k = 1; k <= max_steps; ++k) {
            pf *= lambda * lambda / ((2.0 * k - 1.0) * (2.0 * k));
            coef[static_cast<std::size_t>(k)] = pf / denom;
        }
    }
    return detail::edge_path_series(net, lambda, max_steps, path_budget,
                                    [&coef](int k) { return coef[static_cast<std::size_t>(k)]; });
}

}  // namespace pwp
