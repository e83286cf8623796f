#pragma once

#include <map>
#include <string>
#include <vector>

#include "pwp/network.hpp"

namespace pwp {

// Records what each node of a derived network stands for in the original.
struct Origin {
    enum class Kind { node, edge };
    Kind kind = Kind::edge;
    std::string id;
};

struct TaggedNetwork {
    Network network;
    std::map<std::string, Origin> origin;  // new node id -> original node/edge
};

// Dual network: one node per original link (weight = link weight), one link
// per concatenable pair e -> h sharing the node v = t(e) = s(h), weighted by
// the connecting node's weight f(v).
inline TaggedNetwork dual(const Network& net) {
    TaggedNetwork out;
    std::vector<Node> nodes;
    nodes.reserve(net.edge_count());
    for (const Edge& e : net.edges()) {
        std::string id = "edge:" + e.id;
        nodes.push_back({id, e.weight});
        out.origin.emplace(std::move(id), Origin{Origin::Kind::edge, e.id});
    }
    std::vector<Edge> edges;
    for (const Edge& e : net.edges()) {
        for (const Edge& h : net.edges()) {
            if (e.target != h.source) continue;
            edges.push_back({"concat:" + detail::pair_id(e.id, h.id),
                             "edge:" + e.id, "edge:" + h.id,
                             net.node(e.target).weight});
        }
    }
    out.network = Network(std::move(nodes), std::move(edges));
    return out;
}

// Barycentric division: nodes are V together with E (edge-nodes weighted by
// the link weight); every original link s -> t becomes the unit-weight path
// node:s -> edge:e -> node:t.
inline TaggedNetwork barycentric(const Network& net) {
    TaggedNetwork out;
    std::vector<Node> nodes;
    nodes.reserve(net.node_count() + net.edge_count());
    for (const Node& v : net.nodes()) {
        std::string id = "node:" + v.id;
        nodes.push_back({id, v.weight});
        out.origin.emplace(std::move(id), Origin{Origin::Kind::node, v.id});
    }
    for (const Edge& e : net.edges()) {
        std::string id = "edge:" + e.id;
        nodes.push_back({id, e.weight});
        out.origin.emplace(std::move(id), Origin{Origin::Kind::edge, e.id});
    }
    std::vector<Edge> edges;
    edges.reserve(2 * net.edge_count());
    for (const Edge& e : net.edges()) {
        edges.push_back({"src:" + e.id, "node:" + e.source, "edge:" + e.id, 1.0});
        edges.push_back({"tgt:" + e.id, "edge:" + e.id, "node:" + e.target, 1.0});
    }
    out.network = Network(std::move(nodes), std::move(edges));
    return out;
}

}  // namespace pwp
