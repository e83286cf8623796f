#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pwp/errors.hpp"
#include "pwp/matrix.hpp"

namespace pwp {

struct Node {
    std::string id;
    double weight = 1.0;
};

struct Edge {
    std::string id;
    std::string source;
    std::string target;
    double weight = 1.0;
};

// Double-weighted directed multigraph. Nodes and edges are stored sorted by
// id so every derived object (adjacency, rankings, serializations) is
// deterministic. Values are immutable after construction.
class Network {
public:
    Network() = default;

    Network(std::vector<Node> nodes, std::vector<Edge> edges)
        : nodes_(std::move(nodes)), edges_(std::move(edges)) {
        std::sort(nodes_.begin(), nodes_.end(),
                  [](const Node& a, const Node& b) { return a.id < b.id; });
        std::sort(edges_.begin(), edges_.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
        node_ix_.reserve(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (!node_ix_.emplace(nodes_[i].id, i).second)
                throw DuplicateId("duplicate node id: " + nodes_[i].id);
        }
        edge_ix_.reserve(edges_.size());
        in_deg_.assign(nodes_.size(), 0);
        out_deg_.assign(nodes_.size(), 0);
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (!edge_ix_.emplace(e.id, i).second)
                throw DuplicateId("duplicate edge id: " + e.id);
            auto s = node_ix_.find(e.source);
            auto t = node_ix_.find(e.target);
            if (s == node_ix_.end())
                throw DanglingEndpoint("edge " + e.id + ": unknown source node " + e.source);
            if (t == node_ix_.end())
                throw DanglingEndpoint("edge " + e.id + ": unknown target node " + e.target);
            ++out_deg_[s->second];
            ++in_deg_[t->second];
        }
    }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    // Sorted by id; index into nodes() is the matrix index.
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool has_node(const std::string& id) const { return node_ix_.count(id) != 0; }

    std::size_t node_index(const std::string& id) const {
        auto it = node_ix_.find(id);
        if (it == node_ix_.end()) throw DanglingEndpoint("unknown node id: " + id);
        return it->second;
    }

    const Node& node(const std::string& id) const { return nodes_[node_index(id)]; }

    // Edge-count degrees; self-loops count once in each direction.
    std::size_t out_degree(const std::string& id) const { return out_deg_[node_index(id)]; }
    std::size_t in_degree(const std::string& id) const { return in_deg_[node_index(id)]; }

    double total_node_weight() const {
        return std::accumulate(nodes_.begin(), nodes_.end(), 0.0,
                               [](double s, const Node& n) { return s + n.weight; });
    }
    double total_edge_weight() const {
        return std::accumulate(edges_.begin(), edges_.end(), 0.0,
                               [](double s, const Edge& e) { return s + e.weight; });
    }

private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> node_ix_;
    std::unordered_map<std::string, std::size_t> edge_ix_;
    std::vector<std::size_t> in_deg_;
    std::vector<std::size_t> out_deg_;
};

// Adjacency matrix D (row = target, column = source; parallel edge weights
// summed) plus the node-weight vector f, both indexed by sorted node id.
struct AdjacencyPair {
    Matrix D;
    std::vector<double> f;
    std::vector<std::string> ids;
};

inline AdjacencyPair adjacency(const Network& net) {
    const std::size_t n = net.node_count();
    AdjacencyPair out{Matrix(n, n), std::vector<double>(n), {}};
    out.ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.ids.push_back(net.nodes()[i].id);
        out.f[i] = net.nodes()[i].weight;
    }
    for (const Edge& e : net.edges())
        out.D(net.node_index(e.target), net.node_index(e.source)) += e.weight;
    return out;
}

// Total map original node id -> image node id.
using NodeMap = std::map<std::string, std::string>;

// Blocks are pairwise disjoint nonempty node sets covering the node set.
// Canonical form: ids sorted within a block, blocks sorted by first id.
struct Partition {
    std::vector<std::vector<std::string>> blocks;
};

inline void canonicalize(Partition& p) {
    for (auto& b : p.blocks) std::sort(b.begin(), b.end());
    std::sort(p.blocks.begin(), p.blocks.end());
}

// Validates that `p` partitions exactly the node set of `net`.
inline void validate_partition(const Network& net, const Partition& p) {
    std::vector<std::string> seen;
    for (const auto& block : p.blocks) {
        if (block.empty()) throw ValidationError("partition contains an empty block");
        for (const auto& id : block) {
            if (!net.has_node(id))
                throw ValidationError("partition names unknown node: " + id);
            seen.push_back(id);
        }
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw ValidationError("partition blocks are not disjoint");
    if (seen.size() != net.node_count())
        throw ValidationError("partition does not cover the node set");
}

namespace detail {

// Escapes `specials` (and backslash) so composed ids are unambiguous.
inline std::string escape_id(const std::string& s, std::string_view specials) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '\\' || specials.find(c) != std::string_view::npos) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

inline std::string pair_id(const std::string& a, const std::string& b) {
    return "(" + escape_id(a, ",()") + "," + escape_id(b, ",()") + ")";
}

}  // namespace detail

// Image network under a total node map: node weights are fiber sums, each
// edge is carried to an edge between the image endpoints (same id, same
// weight; parallel images are kept as distinct multigraph edges).
inline Network pushforward(const Network& net, const NodeMap& map) {
    std::map<std::string, double> image_weight;
    for (const Node& n : net.nodes()) {
        auto it = map.find(n.id);
        if (it == map.end())
            throw InvalidMap("node map is not total: missing " + n.id);
        image_weight[it->second] += n.weight;
    }
    std::vector<Node> nodes;
    nodes.reserve(image_weight.size());
    for (const auto& [id, w] : image_weight) nodes.push_back({id, w});
    std::vector<Edge> edges;
    edges.reserve(net.edge_count());
    for (const Edge& e : net.edges())
        edges.push_back({e.id, map.at(e.source), map.at(e.target), e.weight});
    return Network(std::move(nodes), std::move(edges));
}

// Product network: node/edge sets are cartesian products, source and target
// componentwise, both weights multiplicative.
inline Network product(const Network& a, const Network& b) {
    std::vector<Node> nodes;
    nodes.reserve(a.node_count() * b.node_count());
    for (const Node& na : a.nodes())
        for (const Node& nb : b.nodes())
            nodes.push_back({detail::pair_id(na.id, nb.id), na.weight * nb.weight});
    std::vector<Edge> edges;
    edges.reserve(a.edge_count() * b.edge_count());
    for (const Edge& ea : a.edges())
        for (const Edge& eb : b.edges())
            edges.push_back({detail::pair_id(ea.id, eb.id),
                             detail::pair_id(ea.source, eb.source),
                             detail::pair_id(ea.target, eb.target),
                             ea.weight * eb.weight});
    return Network(std::move(nodes), std::move(edges));
}

// Disjoint union; ids are namespaced "a:"/"b:" to avoid collisions.
inline Network disjoint_union(const Network& a, const Network& b) {
    std::vector<Node> nodes;
    nodes.reserve(a.node_count() + b.node_count());
    for (const Node& n : a.nodes()) nodes.push_back({"a:" + n.id, n.weight});
    for (const Node& n : b.nodes()) nodes.push_back({"b:" + n.id, n.weight});
    std::vector<Edge> edges;
    edges.reserve(a.edge_count() + b.edge_count());
    for (const Edge& e : a.edges())
        edges.push_back({"a:" + e.id, "a:" + e.source, "a:" + e.target, e.weight});
    for (const Edge& e : b.edges())
        edges.push_back({"b:" + e.id, "b:" + e.source, "b:" + e.target, e.weight});
    return Network(std::move(nodes), std::move(edges));
}

// Connected components under the equivalence relation generated by
// adjacency (edge direction ignored).
inline Partition weakly_connected_components(const Network& net) {
    std::vector<std::size_t> parent(net.node_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const Edge& e : net.edges()) {
        std::size_t rs = find(net.node_index(e.source));
        std::size_t rt = find(net.node_index(e.target));
        if (rs != rt) parent[rs] = rt;
    }
    std::map<std::size_t, std::vector<std::string>> groups;
    for (std::size_t i = 0; i < net.node_count(); ++i)
        groups[find(i)].push_back(net.nodes()[i].id);
    Partition p;
    p.blocks.reserve(groups.size());
    for (auto& [root, members] : groups) p.blocks.push_back(std::move(members));
    canonicalize(p);
    return p;
}

}  // namespace pwp
