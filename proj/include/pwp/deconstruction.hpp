#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pwp/errors.hpp"
#include "pwp/link_ranking.hpp"
#include "pwp/network.hpp"
#include "pwp/ranking.hpp"

namespace pwp {

// Link-ranking configuration driving a deconstruction run.
struct LinkRanker {
    LinkMethod method = LinkMethod::bridge;
    Kind kind = Kind::importance;
    double lambda = 1.0;
    double tol = kDefaultRankTol;
};

enum class RemovalDirection { highest_first, lowest_first };

struct StopRule {
    enum class Policy { run_to_empty, trees_or_cycles, max_steps };
    Policy policy = Policy::run_to_empty;
    int steps = 0;

    static StopRule run_to_empty() { return {}; }
    static StopRule trees_or_cycles() { return {Policy::trees_or_cycles, 0}; }
    static StopRule max_steps(int k) {
        if (k < 0) throw ValidationError("max_steps must be >= 0");
        return {Policy::max_steps, k};
    }
};

struct DeconstructionStep {
    Ranking ranking;                    // link ranking of the network before removal
    std::vector<std::string> removed;   // the tied block taken out (edge ids, sorted)
    Partition components;               // weak components after removal
};

struct DeconstructionTrace {
    Partition initial;
    std::vector<DeconstructionStep> steps;

    const Partition& final_partition() const {
        return steps.empty() ? initial : steps.back().components;
    }
};

// Forest of components seen along a run. Leaves are the original nodes;
// `step` is the removal step at which the component formed (0 = present in
// the input, -1 for a leaf that never stood alone during an early-stopped
// run). Children are immediate sub-components.
struct DendrogramNode {
    std::vector<std::string> members;
    int step = 0;
    std::vector<std::size_t> children;
};

struct Dendrogram {
    std::vector<DendrogramNode> nodes;
    std::vector<std::size_t> roots;
};

// Node sets grouped by the step at which the lowest-first deconstruction
// isolated them; innermost (latest isolated, the core) first.
struct Ring {
    int step = 0;
    std::vector<std::string> members;
};

struct RingDecomposition {
    std::vector<Ring> rings;
};

struct DeconstructionResult {
    Dendrogram dendrogram;
    DeconstructionTrace trace;
};

namespace detail {

inline Network without_edges(const Network& net, const std::vector<std::string>& removed) {
    std::set<std::string> gone(removed.begin(), removed.end());
    std::vector<Node> nodes(net.nodes());
    std::vector<Edge> edges;
    edges.reserve(net.edge_count() - removed.size());
    for (const Edge& e : net.edges())
        if (!gone.count(e.id)) edges.push_back(e);
    return Network(std::move(nodes), std::move(edges));
}

// Every weak component has at most as many edges as nodes.
inline bool all_trees_or_cycles(const Network& net, const Partition& components) {
    std::map<std::string, std::size_t> block_of;
    for (std::size_t b = 0; b < components.blocks.size(); ++b)
        for (const auto& id : components.blocks[b]) block_of[id] = b;
    std::vector<std::size_t> edge_count(components.blocks.size(), 0);
    for (const Edge& e : net.edges()) ++edge_count[block_of.at(e.source)];
    for (std::size_t b = 0; b < components.blocks.size(); ++b)
        if (edge_count[b] > components.blocks[b].size()) return false;
    return true;
}

inline Dendrogram build_dendrogram(const Network& net, const DeconstructionTrace& trace) {
    // first step at which each distinct component set appears
    std::map<std::vector<std::string>, int> first_seen;
    for (const auto& block : trace.initial.blocks) first_seen.emplace(block, 0);
    for (std::size_t s = 0; s < trace.steps.size(); ++s)
        for (const auto& block : trace.steps[s].components.blocks)
            first_seen.emplace(block, static_cast<int>(s) + 1);
    // all original nodes are leaves even if never isolated by the run
    for (const Node& v : net.nodes())
        first_seen.emplace(std::vector<std::string>{v.id}, -1);

    Dendrogram d;
    d.nodes.reserve(first_seen.size());
    for (const auto& [members, step] : first_seen)
        d.nodes.push_back({members, step, {}});
    // components refine over time, so the sets form a laminar family and the
    // parent is the smallest strict superset
    std::vector<std::size_t> order(d.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.nodes[a].members.size() < d.nodes[b].members.size();
    });
    auto contains = [](const std::vector<std::string>& big, const std::vector<std::string>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    std::vector<bool> is_root(d.nodes.size(), true);
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t child = order[oi];
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const std::size_t cand = order[oj];
            if (d.nodes[cand].members.size() == d.nodes[child].members.size()) continue;
            if (contains(d.nodes[cand].members, d.nodes[child].members)) {
                d.nodes[cand].children.push_back(child);
                is_root[child] = false;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        std::sort(d.nodes[i].children.begin(), d.nodes[i].children.end(),
                  [&](std::size_t a, std::size_t b) {
                      return d.nodes[a].members < d.nodes[b].members;
                  });
        if (is_root[i]) d.roots.push_back(i);
    }
    std::sort(d.roots.begin(), d.roots.end(), [&](std::size_t a, std::size_t b) {
        return d.nodes[a].members < d.nodes[b].members;
    });
    return d;
}

}  // namespace detail

// Iterated link removal: rank the links of the current network, take out
// the whole top (or bottom) tied block, record the component partition,
// repeat until the stop rule holds or no links remain.
inline DeconstructionResult deconstruct(const Network& net, const LinkRanker& ranker,
                                        RemovalDirection direction, const StopRule& stop) {
    if (net.node_count() == 0) throw ValidationError("deconstruct: network has no nodes");
    DeconstructionTrace trace;
    trace.initial = weakly_connected_components(net);
    Network cur = net;
    Partition components = trace.initial;
    auto stop_now = [&](int steps_done) {
        switch (stop.policy) {
            case StopRule::Policy::run_to_empty: return false;
            case StopRule::Policy::trees_or_cycles:
                return detail::all_trees_or_cycles(cur, components);
            default: return steps_done >= stop.steps;
        }
    };
    while (cur.edge_count() > 0 && !stop_now(static_cast<int>(trace.steps.size()))) {
        DeconstructionStep step;
        step.ranking = rank_links(cur, ranker.method, ranker.kind, ranker.lambda, ranker.tol);
        step.removed = direction == RemovalDirection::highest_first ? step.ranking.blocks.front()
                                                                    : step.ranking.blocks.back();
        cur = detail::without_edges(cur, step.removed);
        components = weakly_connected_components(cur);
        step.components = components;
        trace.steps.push_back(std::move(step));
    }
    return {detail::build_dendrogram(net, trace), std::move(trace)};
}

// Highest-first deconstruction; returns the component partition at stop.
inline Partition clusters(const Network& net, const LinkRanker& ranker, const StopRule& stop) {
    return deconstruct(net, ranker, RemovalDirection::highest_first, stop)
            .trace.final_partition();
}

// Lowest-first deconstruction to the bare network; nodes are grouped by the
// step at which they become isolated, the most resilient group innermost.
inline RingDecomposition core_periphery(const Network& net, const LinkRanker& ranker) {
    DeconstructionResult run =
            deconstruct(net, ranker, RemovalDirection::lowest_first, StopRule::run_to_empty());
    std::map<std::string, int> isolation;
    auto note = [&](const Partition& p, int step) {
        for (const auto& block : p.blocks)
            if (block.size() == 1) isolation.emplace(block.front(), step);
    };
    note(run.trace.initial, 0);
    for (std::size_t s = 0; s < run.trace.steps.size(); ++s)
        note(run.trace.steps[s].components, static_cast<int>(s) + 1);

    std::map<int, std::vector<std::string>, std::greater<int>> by_step;
    for (const auto& [id, step] : isolation) by_step[step].push_back(id);
    RingDecomposition out;
    out.rings.reserve(by_step.size());
    for (auto& [step, members] : by_step) {
        std::sort(members.begin(), members.end());
        out.rings.push_back({step, std::move(members)});
    }
    return out;
}

}  // namespace pwp
