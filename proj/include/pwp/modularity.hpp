#pragma once

#include <vector>

#include "pwp/errors.hpp"
#include "pwp/influence.hpp"
#include "pwp/network.hpp"

namespace pwp {

struct ModularityReport {
    double value = 0.0;
    double total_weight = 0.0;                  // m for Q, M(lambda) for Q_lambda
    std::vector<double> block_contributions;    // in canonical block order
};

namespace detail {

// Shared kernel: Q-style sum over ordered pairs (i,j) in the same block,
// diagonal included, of W_ij/m - r_i c_j / m^2.
inline ModularityReport modularity_kernel(const Network& net, const Partition& partition,
                                          const Matrix& w) {
    validate_partition(net, partition);
    Partition p = partition;
    canonicalize(p);
    const std::size_t n = net.node_count();
    double m = 0.0;
    std::vector<double> row(n, 0.0), col(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            row[i] += w(i, j);
            col[j] += w(i, j);
            m += w(i, j);
        }
    ModularityReport rep;
    rep.total_weight = m;
    rep.block_contributions.reserve(p.blocks.size());
    for (const auto& block : p.blocks) {
        double q = 0.0;
        for (const auto& a : block)
            for (const auto& b : block) {
                const std::size_t i = net.node_index(a);
                const std::size_t j = net.node_index(b);
                q += w(i, j) / m - (row[i] / m) * (col[j] / m);
            }
        rep.block_contributions.push_back(q);
        rep.value += q;
    }
    return rep;
}

inline void require_nonnegative(const Matrix& d) {
    for (double v : d.data())
        if (v < 0.0) throw NegativeWeights("modularity requires nonnegative link weights");
}

}  // namespace detail

// Girvan-Newman modularity for a directed weighted network:
//   Q(pi) = sum_{i~j} ( D_ij/m - d_i^in d_j^out / m^2 ),  m = sum D_ij.
inline ModularityReport modularity(const Network& net, const Partition& partition) {
    AdjacencyPair adj = adjacency(net);
    detail::require_nonnegative(adj.D);
    double m = 0.0;
    for (double v : adj.D.data()) m += v;
    if (!(m > 0.0)) throw ZeroTotalWeight("modularity: total link weight must be > 0");
    return detail::modularity_kernel(net, partition, adj.D);
}

// One-parameter deformation: D replaced by T(lambda), degrees by the row and
// column sums of T, m by M(lambda) = sum T_ij. Q_0 = Q on unit node weights.
inline ModularityReport modularity_deformed(const Network& net, const Partition& partition,
                                            double lambda, bool use_node_weights = true) {
    AdjacencyPair adj = adjacency(net);
    detail::require_nonnegative(adj.D);
    if (use_node_weights)
        for (double v : adj.f)
            if (v < 0.0)
                throw NegativeWeights("modularity_deformed requires nonnegative node weights");
    InfluenceMatrix infl = indirect_influences(net, lambda, use_node_weights);
    double m = 0.0;
    for (double v : infl.T.data()) m += v;
    if (!(m > 0.0))
        throw ZeroTotalInfluence("modularity_deformed: total indirect influence must be > 0");
    return detail::modularity_kernel(net, partition, infl.T);
}

}  // namespace pwp
