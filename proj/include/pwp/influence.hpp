#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pwp/errors.hpp"
#include "pwp/matrix.hpp"
#include "pwp/network.hpp"

namespace pwp {

// Matrix of indirect influences T(D,f,lambda) together with the id order of
// its rows/columns (node ids, or edge ids for the dual-space oracles).
struct InfluenceMatrix {
    Matrix T;
    double lambda = 1.0;
    std::vector<std::string> index;
};

// Truncation of the k >= 1 path series: enumerate up to max_terms edge
// steps; tolerance is the tail budget the caller sized max_terms for.
struct SeriesParams {
    double tolerance = 1e-12;
    int max_terms = 30;
};

inline void validate_series_params(const SeriesParams& p) {
    if (!(p.tolerance > 0.0))
        throw ValidationError("series tolerance must be > 0");
    if (p.max_terms < 1)
        throw ValidationError("series max_terms must be >= 1");
}

// (D.f)_ij = D_ij * f_j : folds node weights into the propagation matrix.
inline Matrix bullet(const Matrix& d, std::span<const double> f) {
    if (d.rows() != d.cols() || d.cols() != f.size())
        throw DimensionMismatch("bullet: D must be n x n with f of length n");
    Matrix out = d;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= f[j];
    return out;
}

namespace detail {

inline void require_finite_inputs(const Matrix& d, std::span<const double> f, double lambda) {
    if (!d.all_finite()) throw NonFiniteInput("non-finite entry in D");
    for (double v : f)
        if (!std::isfinite(v)) throw NonFiniteInput("non-finite entry in f");
    if (!std::isfinite(lambda)) throw NonFiniteInput("non-finite lambda");
    if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
}

}  // namespace detail

// PWP map on a double-weighted network:
//   T(D,f,lambda) = (e^{lambda * D.f} - I) / (e^lambda - 1),  lambda > 0
// with the continuity limit T(D,f,0) = D.f.
inline Matrix pwp_matrix(const Matrix& d, std::span<const double> f, double lambda) {
    detail::require_finite_inputs(d, f, lambda);
    Matrix a = bullet(d, f);
    if (lambda == 0.0) return a;
    Matrix t = expm_minus_identity(a * lambda);
    t *= 1.0 / std::expm1(lambda);
    if (!t.all_finite()) throw NonFiniteInput("pwp_matrix: overflow");
    return t;
}

// Link-weight-only form: T(D,lambda) = (e^{lambda D} - I)/(e^lambda - 1).
inline Matrix pwp_matrix(const Matrix& d, double lambda) {
    std::vector<double> ones(d.rows(), 1.0);
    return pwp_matrix(d, ones, lambda);
}

inline InfluenceMatrix indirect_influences(const Network& net, double lambda,
                                           bool use_node_weights = true) {
    AdjacencyPair adj = adjacency(net);
    if (!use_node_weights) adj.f.assign(adj.f.size(), 1.0);
    return InfluenceMatrix{pwp_matrix(adj.D, adj.f, lambda), lambda, std::move(adj.ids)};
}

namespace detail {

// Weights of the normalized length measure lambda^k / ((e^lambda - 1) k!)
// for k = 1..max_len; at lambda = 0 the limit concentrates on k = 1.
inline std::vector<double> length_coefficients(double lambda, int max_len) {
    std::vector<double> coef(static_cast<std::size_t>(max_len) + 1, 0.0);
    if (lambda == 0.0) {
        coef[1] = 1.0;
        return coef;
    }
    const double denom = std::expm1(lambda);
    double pow_over_fact = 1.0;
    for (int k = 1; k <= max_len; ++k) {
        pow_over_fact *= lambda / k;
        coef[static_cast<std::size_t>(k)] = pow_over_fact / denom;
    }
    return coef;
}

// Out-edge indices per node index, in sorted-edge order.
inline std::vector<std::vector<std::size_t>> out_edges_by_node(const Network& net) {
    std::vector<std::vector<std::size_t>> out(net.node_count());
    for (std::size_t e = 0; e < net.edge_count(); ++e)
        out[net.node_index(net.edges()[e].source)].push_back(e);
    return out;
}

// Number of directed edge-paths of length 1..max_len, saturating at cap+1.
inline std::uint64_t count_edge_paths(const Network& net, int max_len, std::uint64_t cap) {
    const std::size_t m = net.edge_count();
    std::vector<std::uint64_t> cur(m, 1), next(m);
    auto out = out_edges_by_node(net);
    std::uint64_t total = m;
    for (int k = 2; k <= max_len && total <= cap; ++k) {
        std::fill(next.begin(), next.end(), 0);
        std::uint64_t layer = 0;
        for (std::size_t e = 0; e < m; ++e) {
            if (cur[e] == 0) continue;
            std::size_t head = net.node_index(net.edges()[e].target);
            for (std::size_t h : out[head]) {
                next[h] += cur[e];
                if (next[h] > cap) next[h] = cap + 1;
            }
        }
        for (std::uint64_t c : next) {
            layer += c;
            if (layer > cap) layer = cap + 1;
        }
        if (layer == 0) break;
        total += layer;
        if (total > cap) total = cap + 1;
        cur.swap(next);
    }
    return total;
}

}  // namespace detail

// Independent series oracle: T_ij as the explicit sum over directed
// edge-paths (multi-edges distinct), each path of length k contributing
//   w(e_k) f(s e_k) ... w(e_1) f(s e_1) * lambda^k / ((e^lambda - 1) k!)
// at row t(e_k), column s(e_1). Intended for small networks; refuses to
// enumerate more than path_budget paths.
inline InfluenceMatrix path_enumeration_influences(const Network& net, double lambda,
                                                   const SeriesParams& params = {},
                                                   std::uint64_t path_budget = 4'000'000) {
    validate_series_params(params);
    if (!std::isfinite(lambda)) throw NonFiniteInput("non-finite lambda");
    if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
    const int max_len = params.max_terms;
    if (detail::count_edge_paths(net, max_len, path_budget) > path_budget)
        throw OracleBudgetExceeded("path enumeration exceeds budget of " +
                                   std::to_string(path_budget) + " paths");

    const std::size_t n = net.node_count();
    InfluenceMatrix out{Matrix(n, n), lambda, {}};
    out.index.reserve(n);
    for (const Node& nd : net.nodes()) out.index.push_back(nd.id);

    const std::vector<double> coef = detail::length_coefficients(lambda, max_len);
    const auto out_edges = detail::out_edges_by_node(net);
    std::vector<double> node_weight(n);
    for (std::size_t i = 0; i < n; ++i) node_weight[i] = net.nodes()[i].weight;

    // DFS over edge sequences; prefix product carries w(e_i) f(s e_i).
    struct Frame {
        std::size_t edge;
        int len;
        double prod;
    };
    std::vector<Frame> stack;
    for (std::size_t start = 0; start < net.edge_count(); ++start) {
        const Edge& e0 = net.edges()[start];
        std::size_t col = net.node_index(e0.source);
        stack.push_back({start, 1, e0.weight * node_weight[col]});
        while (!stack.empty()) {
            Frame fr = stack.back();
            stack.pop_back();
            const Edge& last = net.edges()[fr.edge];
            std::size_t row = net.node_index(last.target);
            out.T(row, col) += fr.prod * coef[static_cast<std::size_t>(fr.len)];
            if (fr.len == max_len) continue;
            for (std::size_t h : out_edges[row]) {
                const Edge& eh = net.edges()[h];
                stack.push_back({h, fr.len + 1,
                                 fr.prod * eh.weight * node_weight[net.node_index(eh.source)]});
            }
        }
    }
    return out;
}

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

namespace detail {

// Uniform double in [0,1) from the top 53 bits; keeps the stream identical
// across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Estimates the expected number of active source->target paths when D_ij
// and f_i in [0,1] are activation probabilities of links and nodes, with
// path length drawn from lambda^k/((e^lambda-1) k!) truncated at max_length.
// A path is active when all its links and all its step-source nodes are.
// Deterministic for a fixed seed.
inline MonteCarloEstimate monte_carlo_active_paths(const Network& net, double lambda,
                                                   const std::string& target,
                                                   const std::string& source,
                                                   std::size_t samples, int max_length,
                                                   std::uint64_t seed) {
    if (!std::isfinite(lambda)) throw NonFiniteInput("non-finite lambda");
    if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
    if (samples < 1) throw ValidationError("samples must be >= 1");
    if (max_length < 1) throw ValidationError("max_length must be >= 1");
    AdjacencyPair adj = adjacency(net);
    const std::size_t n = adj.ids.size();
    for (std::size_t k = 0; k < n * n; ++k)
        if (adj.D.data()[k] < 0.0 || adj.D.data()[k] > 1.0)
            throw ProbabilityOutOfRange("link activation probabilities must lie in [0,1]");
    for (double v : adj.f)
        if (v < 0.0 || v > 1.0)
            throw ProbabilityOutOfRange("node activation probabilities must lie in [0,1]");
    const std::size_t row = net.node_index(target);
    const std::size_t col = net.node_index(source);

    // Truncated, renormalized cumulative length distribution.
    std::vector<double> cum;
    cum.reserve(static_cast<std::size_t>(max_length));
    {
        const auto coef = detail::length_coefficients(lambda, max_length);
        double total = 0.0;
        for (int k = 1; k <= max_length; ++k) total += coef[static_cast<std::size_t>(k)];
        double acc = 0.0;
        for (int k = 1; k <= max_length; ++k) {
            acc += coef[static_cast<std::size_t>(k)] / total;
            cum.push_back(acc);
        }
        cum.back() = 1.0;
    }

    std::mt19937_64 rng(seed);
    std::vector<double> active(n * n);
    std::vector<double> vec(n), tmp(n);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double u = detail::uniform01(rng);
        int len = 1;
        while (len < max_length && u > cum[static_cast<std::size_t>(len - 1)]) ++len;
        // activate links, then nodes, in fixed row-major / index order
        for (std::size_t k = 0; k < n * n; ++k)
            active[k] = detail::uniform01(rng) < adj.D.data()[k] ? 1.0 : 0.0;
        std::vector<double> node_active(n);
        for (std::size_t i = 0; i < n; ++i)
            node_active[i] = detail::uniform01(rng) < adj.f[i] ? 1.0 : 0.0;
        // count active paths of the drawn length from col to row
        std::fill(vec.begin(), vec.end(), 0.0);
        vec[col] = node_active[col];
        for (int step = 0; step < len; ++step) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += active[i * n + j] * vec[j];
                tmp[i] = (step + 1 < len) ? acc * node_active[i] : acc;
            }
            vec.swap(tmp);
        }
        const double x = vec[row];
        const double delta = x - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (x - mean);
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.estimate = mean;
    if (samples > 1) {
        const double var = m2 / static_cast<double>(samples - 1);
        est.standard_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    }
    return est;
}

}  // namespace pwp
