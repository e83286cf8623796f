#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pwp/pwp.hpp"

namespace testsupport {

using namespace pwp;

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Three directed 4-cycles 1>2>3>4>1, 5>6>7>8>5, 9>10>11>12>9 joined by the
// connector cycle 4>6>9>4; 12 nodes, 15 links, all weights 1.
inline Network make_s_network() {
    std::vector<Node> nodes;
    for (int i = 1; i <= 12; ++i) nodes.push_back({std::to_string(i), 1.0});
    std::vector<Edge> edges;
    auto cyc = [&](int a, int b, int c, int d) {
        for (auto [u, v] : {std::pair{a, b}, {b, c}, {c, d}, {d, a}})
            edges.push_back({std::to_string(u) + ">" + std::to_string(v), std::to_string(u),
                             std::to_string(v), 1.0});
    };
    cyc(1, 2, 3, 4);
    cyc(5, 6, 7, 8);
    cyc(9, 10, 11, 12);
    for (auto [u, v] : {std::pair{4, 6}, {6, 9}, {9, 4}})
        edges.push_back({std::to_string(u) + ">" + std::to_string(v), std::to_string(u),
                         std::to_string(v), 1.0});
    return Network(std::move(nodes), std::move(edges));
}

inline Network make_path(int n) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) nodes.push_back({std::to_string(i), 1.0});
    for (int i = 1; i < n; ++i)
        edges.push_back({"e" + std::to_string(i), std::to_string(i), std::to_string(i + 1), 1.0});
    return Network(std::move(nodes), std::move(edges));
}

inline Network make_cycle(int n) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) nodes.push_back({std::to_string(i), 1.0});
    for (int i = 1; i <= n; ++i)
        edges.push_back({"e" + std::to_string(i), std::to_string(i),
                         std::to_string(i % n + 1), 1.0});
    return Network(std::move(nodes), std::move(edges));
}

struct RandomNetOptions {
    int min_nodes = 2;
    int max_nodes = 6;
    int max_extra_edges = 2;       // edge count in [nodes-1, nodes-1+max_extra]
    bool self_loops = true;
    bool multi_edges = true;
    double max_row_sum = 2.5;      // cap on ||D||_inf, keeps series tails tiny
    std::uint64_t path_budget = 400000;
    int path_len = 31;             // budget horizon for enumeration oracles
};

// Deterministic random double-weighted network with weights in [0,1],
// resampled until the enumeration-oracle budget and norm caps hold.
inline Network random_network(std::mt19937_64& rng, const RandomNetOptions& opt = {}) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const int n = opt.min_nodes +
                      static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                       opt.max_nodes - opt.min_nodes + 1));
        const int m = std::max(1, n - 1 + static_cast<int>(
                                                  rng() % static_cast<std::uint64_t>(
                                                                  opt.max_extra_edges + 1)));
        std::vector<Node> nodes;
        for (int i = 1; i <= n; ++i)
            nodes.push_back({std::to_string(i), uniform01(rng)});
        std::vector<Edge> edges;
        std::set<std::pair<int, int>> used;
        for (int e = 0; e < m; ++e) {
            int u = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            if (!opt.self_loops && u == v) v = v % n + 1 == u ? (v + 1) % n + 1 : v % n + 1;
            if (!opt.multi_edges && !used.insert({u, v}).second) continue;
            edges.push_back({"e" + std::to_string(e + 1), std::to_string(u),
                             std::to_string(v), uniform01(rng)});
        }
        if (edges.empty()) continue;
        Network net(std::move(nodes), std::move(edges));
        if (adjacency(net).D.inf_norm() > opt.max_row_sum) continue;
        if (pwp::detail::count_edge_paths(net, opt.path_len, opt.path_budget) > opt.path_budget)
            continue;
        return net;
    }
    throw std::runtime_error("random_network: rejection loop exhausted");
}

// Probabilistic network for the active-paths theorem: summed parallel
// weights stay in [0,1] (no multi-edges), f in [0,1].
inline Network random_probabilistic_network(std::mt19937_64& rng, int max_nodes = 4) {
    RandomNetOptions opt;
    opt.min_nodes = 2;
    opt.max_nodes = max_nodes;
    opt.multi_edges = false;
    opt.max_row_sum = 1e9;  // entries are probabilities already
    return random_network(rng, opt);
}

// Brute-force enumeration of rankings (ordered set partitions) of [n]:
// every set partition via restricted growth strings, every ordering of its
// blocks. Returns the total count and the set of block-size sequences.
struct RankingEnumeration {
    std::int64_t total = 0;
    std::set<std::vector<std::size_t>> class_signatures;
};

inline RankingEnumeration enumerate_rankings(int n) {
    RankingEnumeration out;
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    auto process = [&]() {
        int k = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
        for (int c : rgs) ++sizes[static_cast<std::size_t>(c)];
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            ++out.total;
            std::vector<std::size_t> sig;
            sig.reserve(perm.size());
            for (int b : perm) sig.push_back(sizes[static_cast<std::size_t>(b)]);
            out.class_signatures.insert(std::move(sig));
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    // iterate restricted growth strings
    while (true) {
        process();
        int i = n - 1;
        for (; i > 0; --i) {
            int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
            if (rgs[static_cast<std::size_t>(i)] <= prefix_max) break;
        }
        if (i == 0) break;
        ++rgs[static_cast<std::size_t>(i)];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
    }
    return out;
}

inline bool partition_equals(const Partition& p,
                             std::vector<std::vector<std::string>> expected) {
    Partition e{std::move(expected)};
    canonicalize(e);
    Partition q = p;
    canonicalize(q);
    return q.blocks == e.blocks;
}

}  // namespace testsupport
