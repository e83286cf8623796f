#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pwp/deconstruction.hpp"
#include "pwp/errors.hpp"
#include "pwp/influence.hpp"
#include "pwp/io.hpp"
#include "pwp/link_ranking.hpp"
#include "pwp/modularity.hpp"
#include "pwp/network.hpp"
#include "pwp/ranking.hpp"

namespace pwp {

namespace cli_detail {

inline Kind parse_kind(const std::string& s) {
    if (s == "dependence") return Kind::dependence;
    if (s == "influence") return Kind::influence;
    if (s == "importance") return Kind::importance;
    throw ValidationError("unknown kind: " + s);
}

inline LinkMethod parse_method(const std::string& s) {
    if (s == "dual") return LinkMethod::dual;
    if (s == "barycentric") return LinkMethod::barycentric;
    if (s == "bridge") return LinkMethod::bridge;
    throw ValidationError("unknown method: " + s);
}

inline StopRule parse_stop(const std::string& s) {
    if (s == "empty") return StopRule::run_to_empty();
    if (s == "trees-or-cycles") return StopRule::trees_or_cycles();
    if (s.rfind("steps=", 0) == 0) {
        try {
            std::size_t pos = 0;
            int k = std::stoi(s.substr(6), &pos);
            if (pos != s.size() - 6 || k < 0) throw std::invalid_argument("bad");
            return StopRule::max_steps(k);
        } catch (const std::exception&) {
            throw ValidationError("bad stop rule: " + s);
        }
    }
    throw ValidationError("unknown stop rule: " + s + " (use empty|trees-or-cycles|steps=k)");
}

inline std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> grid;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string item = s.substr(start, comma == std::string::npos ? comma : comma - start);
        try {
            std::size_t pos = 0;
            double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument("bad");
            grid.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("bad --lambda-grid entry: \"" + item + "\"");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (grid.empty()) throw ValidationError("--lambda-grid must list at least one value");
    return grid;
}

inline void emit(const std::string& text, const std::string& output_path, std::ostream& out) {
    if (output_path.empty() || output_path == "-") {
        out << text;
        return;
    }
    std::ofstream f(output_path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file: " + output_path);
    f << text;
}

}  // namespace cli_detail

// Batch command line; every analysis is a subcommand with deterministic
// JSON (or DOT) output. Returns 0 on success, 2 on validation errors, 3 on
// numerical failures. `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"indirect-influence analysis of double-weighted directed networks"};
    app.require_subcommand(1);
    app.fallthrough();

    double lambda = 1.0;
    std::string kind_s = "importance";
    double tol = kDefaultRankTol;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string output_path;
    std::string node_weights_path;
    bool strict = false;
    app.add_option("--lambda", lambda, "deformation parameter (>= 0)")->capture_default_str();
    app.add_option("--kind", kind_s, "dependence|influence|importance")->capture_default_str();
    app.add_option("--tol", tol, "relative tie tolerance for rankings")->capture_default_str();
    app.add_option("--seed", seed, "random seed (Monte-Carlo oracle)")->capture_default_str();
    app.add_option("--format", format, "json|dot (dot: transform only)")->capture_default_str();
    app.add_option("-o,--output", output_path, "output file (default stdout)");
    app.add_option("--node-weights", node_weights_path, "node-weight sidecar for TSV input");
    app.add_flag("--strict", strict, "reject unknown fields in JSON input");

    auto load = [&](const std::string& path) {
        return load_network(path, strict,
                            node_weights_path.empty()
                                    ? std::nullopt
                                    : std::optional<std::string>(node_weights_path));
    };
    auto require_json_format = [&]() {
        if (format != "json")
            throw ValidationError("--format " + format + " is not supported by this command");
    };
    auto finish = [&](const ordered_json& doc) {
        require_json_format();
        cli_detail::emit(to_text(doc), output_path, out);
    };

    // rank-nodes
    std::string rn_input;
    auto* rank_nodes_cmd = app.add_subcommand("rank-nodes", "rank nodes by indirect influences");
    rank_nodes_cmd->add_option("input", rn_input, "network file (JSON or TSV, - for stdin)")
            ->required();
    rank_nodes_cmd->callback([&] {
        const Kind kind = cli_detail::parse_kind(kind_s);
        Ranking r = rank_nodes(load(rn_input), lambda, kind, tol);
        ordered_json doc = ranking_json(r);
        doc["items"] = "nodes";
        doc["kind"] = kind_s;
        doc["lambda"] = lambda;
        finish(doc);
    });

    // rank-links
    std::string rl_input, rl_method = "dual";
    bool rl_mixed = false;
    auto* rank_links_cmd = app.add_subcommand("rank-links", "rank links");
    rank_links_cmd->add_option("input", rl_input, "network file")->required();
    rank_links_cmd->add_option("--method", rl_method, "dual|barycentric|bridge")
            ->capture_default_str();
    rank_links_cmd->add_flag("--mixed", rl_mixed,
                             "emit the full node+link ranking (barycentric only)");
    rank_links_cmd->callback([&] {
        const Kind kind = cli_detail::parse_kind(kind_s);
        const LinkMethod method = cli_detail::parse_method(rl_method);
        Network net = load(rl_input);
        ordered_json doc;
        if (rl_mixed) {
            if (method != LinkMethod::barycentric)
                throw ValidationError("--mixed requires --method barycentric");
            doc = ranking_json(barycentric_mixed_ranking(net, kind, lambda, tol));
            doc["items"] = "nodes+links";
        } else {
            doc = ranking_json(rank_links(net, method, kind, lambda, tol));
            doc["items"] = "links";
        }
        doc["method"] = rl_method;
        doc["kind"] = kind_s;
        doc["lambda"] = lambda;
        finish(doc);
    });

    // cluster
    std::string cl_input, cl_method = "dual", cl_stop = "trees-or-cycles";
    auto* cluster_cmd = app.add_subcommand("cluster", "clusters via highest-first deconstruction");
    cluster_cmd->add_option("input", cl_input, "network file")->required();
    cluster_cmd->add_option("--method", cl_method, "dual|barycentric|bridge")
            ->capture_default_str();
    cluster_cmd->add_option("--stop", cl_stop, "empty|trees-or-cycles|steps=k")
            ->capture_default_str();
    cluster_cmd->callback([&] {
        LinkRanker ranker{cli_detail::parse_method(cl_method), cli_detail::parse_kind(kind_s),
                          lambda, tol};
        StopRule stop = cli_detail::parse_stop(cl_stop);
        DeconstructionResult run =
                deconstruct(load(cl_input), ranker, RemovalDirection::highest_first, stop);
        ordered_json doc = partition_json(run.trace.final_partition());
        doc["method"] = cl_method;
        doc["kind"] = kind_s;
        doc["lambda"] = lambda;
        doc["stop"] = cl_stop;
        doc["steps"] = run.trace.steps.size();
        finish(doc);
    });

    // core-periphery
    std::string cp_input, cp_method = "dual";
    auto* core_cmd = app.add_subcommand("core-periphery",
                                        "rings via lowest-first deconstruction");
    core_cmd->add_option("input", cp_input, "network file")->required();
    core_cmd->add_option("--method", cp_method, "dual|barycentric|bridge")
            ->capture_default_str();
    core_cmd->callback([&] {
        LinkRanker ranker{cli_detail::parse_method(cp_method), cli_detail::parse_kind(kind_s),
                          lambda, tol};
        ordered_json doc = rings_json(core_periphery(load(cp_input), ranker));
        doc["method"] = cp_method;
        doc["kind"] = kind_s;
        doc["lambda"] = lambda;
        finish(doc);
    });

    // modularity
    std::string mo_input, mo_partition, mo_grid;
    bool mo_unit_f = false;
    auto* mod_cmd = app.add_subcommand("modularity", "Q and its deformation Q_lambda");
    mod_cmd->add_option("input", mo_input, "network file")->required();
    mod_cmd->add_option("--partition", mo_partition, "partition file")->required();
    mod_cmd->add_option("--lambda-grid", mo_grid, "comma-separated lambdas for Q_lambda");
    mod_cmd->add_flag("--unit-node-weights", mo_unit_f, "force f = 1 inside T(lambda)");
    mod_cmd->callback([&] {
        Network net = load(mo_input);
        Partition p = parse_partition_json(read_file(mo_partition));
        ordered_json doc;
        doc["format_version"] = kFormatVersion;
        doc["type"] = "modularity";
        doc["q"] = modularity_json(modularity(net, p));
        std::vector<double> grid =
                mo_grid.empty() ? std::vector<double>{lambda} : cli_detail::parse_grid(mo_grid);
        auto& arr = doc["q_lambda"] = ordered_json::array();
        for (double l : grid) {
            ordered_json entry = modularity_json(modularity_deformed(net, p, l, !mo_unit_f));
            entry["lambda"] = l;
            arr.push_back(std::move(entry));
        }
        finish(doc);
    });

    // influence
    std::string in_input;
    bool in_unit_f = false;
    auto* infl_cmd = app.add_subcommand("influence", "dump the matrix of indirect influences");
    infl_cmd->add_option("input", in_input, "network file")->required();
    infl_cmd->add_flag("--unit-node-weights", in_unit_f, "force f = 1");
    infl_cmd->callback([&] {
        finish(matrix_json(indirect_influences(load(in_input), lambda, !in_unit_f)));
    });

    // transform
    std::vector<std::string> tr_inputs;
    std::string tr_op;
    auto* tr_cmd = app.add_subcommand("transform", "derived networks");
    tr_cmd->add_option("input", tr_inputs, "network file(s)")->expected(1, 2)->required();
    tr_cmd->add_option("--op", tr_op, "dual|barycentric|product|union")->required();
    tr_cmd->callback([&] {
        Network result;
        if (tr_op == "dual" || tr_op == "barycentric") {
            if (tr_inputs.size() != 1)
                throw ValidationError("--op " + tr_op + " takes exactly one input");
            Network net = load(tr_inputs[0]);
            result = tr_op == "dual" ? dual(net).network : barycentric(net).network;
        } else if (tr_op == "product" || tr_op == "union") {
            if (tr_inputs.size() != 2)
                throw ValidationError("--op " + tr_op + " takes exactly two inputs");
            Network a = load(tr_inputs[0]);
            Network b = load(tr_inputs[1]);
            result = tr_op == "product" ? product(a, b) : disjoint_union(a, b);
        } else {
            throw ValidationError("unknown --op: " + tr_op);
        }
        if (format == "dot")
            cli_detail::emit(to_dot(result), output_path, out);
        else
            finish(network_json(result));
    });

    // oracle
    std::string or_input, or_mode = "path", or_target, or_source;
    std::size_t or_samples = 100000;
    int or_max_length = 30;
    auto* or_cmd = app.add_subcommand("oracle", "series / Monte-Carlo verification");
    or_cmd->add_option("input", or_input, "network file")->required();
    or_cmd->add_option("--mode", or_mode, "path|mc")->capture_default_str();
    or_cmd->add_option("--target", or_target, "target node id (mc)");
    or_cmd->add_option("--source", or_source, "source node id (mc)");
    or_cmd->add_option("--samples", or_samples, "Monte-Carlo sample count")
            ->capture_default_str();
    or_cmd->add_option("--max-length", or_max_length, "path length truncation")
            ->capture_default_str();
    or_cmd->callback([&] {
        Network net = load(or_input);
        ordered_json doc;
        doc["format_version"] = kFormatVersion;
        doc["type"] = "oracle";
        doc["mode"] = or_mode;
        doc["lambda"] = lambda;
        if (or_mode == "path") {
            InfluenceMatrix exact = indirect_influences(net, lambda);
            SeriesParams params;
            params.max_terms = or_max_length;
            InfluenceMatrix series = path_enumeration_influences(net, lambda, params);
            doc["max_length"] = or_max_length;
            doc["max_abs_diff"] = max_abs_diff(exact.T, series.T);
            doc["pwp"] = matrix_json(exact);
            doc["series"] = matrix_json(series);
        } else if (or_mode == "mc") {
            if (or_target.empty() || or_source.empty())
                throw ValidationError("--mode mc requires --target and --source");
            MonteCarloEstimate est = monte_carlo_active_paths(net, lambda, or_target, or_source,
                                                              or_samples, or_max_length, seed);
            InfluenceMatrix exact = indirect_influences(net, lambda);
            const double exact_entry =
                    exact.T(net.node_index(or_target), net.node_index(or_source));
            doc["target"] = or_target;
            doc["source"] = or_source;
            doc["samples"] = est.samples;
            doc["max_length"] = or_max_length;
            doc["seed"] = seed;
            doc["estimate"] = est.estimate;
            doc["standard_error"] = est.standard_error;
            doc["exact"] = exact_entry;
            doc["abs_error"] = std::abs(est.estimate - exact_entry);
        } else {
            throw ValidationError("unknown oracle mode: " + or_mode);
        }
        finish(doc);
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << ordered_json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << ordered_json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const Error& e) {
        err << ordered_json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << ordered_json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
}

}  // namespace pwp
