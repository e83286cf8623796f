#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwp/deconstruction.hpp"
#include "pwp/errors.hpp"
#include "pwp/influence.hpp"
#include "pwp/modularity.hpp"
#include "pwp/network.hpp"
#include "pwp/ranking.hpp"

namespace pwp {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// All emitted floats use 12 significant digits so that identical inputs
// produce byte-identical files and serialize/parse/serialize is stable.
inline std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace detail {

inline void write_json(std::string& out, const ordered_json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += ordered_json(key).dump();
                out += ": ";
                write_json(out, value, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                write_json(out, value, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case ordered_json::value_t::number_float:
            out += format_number(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace detail

// Canonical text form: two-space indent, insertion-ordered keys, %.12g floats.
inline std::string to_text(const ordered_json& j) {
    std::string out;
    detail::write_json(out, j, 0);
    out += "\n";
    return out;
}

inline ordered_json parse_json_text(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string(e.what()) + " [byte " + std::to_string(e.byte) + "]");
    }
}

namespace detail {

inline void reject_unknown_fields(const ordered_json& obj, const char* where,
                                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw ValidationError(std::string(where) + ": unknown field \"" + key + "\"");
    }
}

inline double number_field(const ordered_json& obj, const char* where, const char* key,
                           std::optional<double> fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (fallback) return *fallback;
        throw ParseError(std::string(where) + ": missing \"" + key + "\"");
    }
    if (!it->is_number())
        throw ParseError(std::string(where) + ": \"" + key + "\" must be a number");
    return it->get<double>();
}

inline std::string string_field(const ordered_json& obj, const char* where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(std::string(where) + ": missing \"" + key + "\"");
    if (!it->is_string())
        throw ParseError(std::string(where) + ": \"" + key + "\" must be a string");
    return it->get<std::string>();
}

}  // namespace detail

// {"nodes":[{"id","weight"}...], "edges":[{"id","source","target","weight"}...]}
// Node/edge weights default to 1. With strict=true unknown fields are errors.
inline Network parse_network_json(const std::string& text, bool strict = false) {
    ordered_json j = parse_json_text(text);
    if (!j.is_object()) throw ParseError("network document must be a JSON object");
    if (strict)
        detail::reject_unknown_fields(j, "network", {"format_version", "type", "nodes", "edges"});
    auto nodes_it = j.find("nodes");
    auto edges_it = j.find("edges");
    if (nodes_it == j.end() || !nodes_it->is_array())
        throw ParseError("network: missing \"nodes\" array");
    if (edges_it == j.end() || !edges_it->is_array())
        throw ParseError("network: missing \"edges\" array");
    std::vector<Node> nodes;
    nodes.reserve(nodes_it->size());
    std::size_t i = 0;
    for (const auto& nj : *nodes_it) {
        const std::string where = "nodes[" + std::to_string(i++) + "]";
        if (!nj.is_object()) throw ParseError(where + ": must be an object");
        if (strict) detail::reject_unknown_fields(nj, where.c_str(), {"id", "weight"});
        nodes.push_back({detail::string_field(nj, where.c_str(), "id"),
                         detail::number_field(nj, where.c_str(), "weight", 1.0)});
    }
    std::vector<Edge> edges;
    edges.reserve(edges_it->size());
    i = 0;
    for (const auto& ej : *edges_it) {
        const std::string where = "edges[" + std::to_string(i++) + "]";
        if (!ej.is_object()) throw ParseError(where + ": must be an object");
        if (strict)
            detail::reject_unknown_fields(ej, where.c_str(),
                                          {"id", "source", "target", "weight"});
        edges.push_back({detail::string_field(ej, where.c_str(), "id"),
                         detail::string_field(ej, where.c_str(), "source"),
                         detail::string_field(ej, where.c_str(), "target"),
                         detail::number_field(ej, where.c_str(), "weight", 1.0)});
    }
    return Network(std::move(nodes), std::move(edges));
}

// Edge list "source<TAB>target[<TAB>weight]", one edge per line, ids e1,e2,...
// assigned in line order; '#' comments and blank lines ignored. The optional
// sidecar lists "node<TAB>weight" lines; unlisted nodes get weight 1 and
// nodes appearing only in the sidecar become isolated nodes.
inline Network parse_network_tsv(const std::string& edge_text,
                                 const std::optional<std::string>& node_text = std::nullopt) {
    auto split_tabs = [](const std::string& line) {
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                f.push_back(line.substr(start));
                return f;
            }
            f.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
    };
    auto parse_weight = [](const std::string& s, const std::string& where) {
        try {
            std::size_t pos = 0;
            double w = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing characters");
            return w;
        } catch (const std::exception&) {
            throw ParseError(where + ": bad weight \"" + s + "\"");
        }
    };

    std::map<std::string, double> node_weight;
    std::vector<std::string> node_order;
    auto see_node = [&](const std::string& id) {
        if (node_weight.emplace(id, 1.0).second) node_order.push_back(id);
    };

    std::vector<Edge> edges;
    std::istringstream in(edge_text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_tabs(line);
        const std::string where = "edge list line " + std::to_string(lineno);
        if (f.size() < 2 || f.size() > 3)
            throw ParseError(where + ": expected source<TAB>target[<TAB>weight]");
        if (f[0].empty() || f[1].empty())
            throw ParseError(where + ": empty node id");
        double w = f.size() == 3 ? parse_weight(f[2], where) : 1.0;
        see_node(f[0]);
        see_node(f[1]);
        edges.push_back({"e" + std::to_string(edges.size() + 1), f[0], f[1], w});
    }
    if (node_text) {
        std::istringstream nin(*node_text);
        lineno = 0;
        while (std::getline(nin, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto f = split_tabs(line);
            const std::string where = "node weight line " + std::to_string(lineno);
            if (f.size() != 2) throw ParseError(where + ": expected node<TAB>weight");
            see_node(f[0]);
            node_weight[f[0]] = parse_weight(f[1], where);
        }
    }
    std::vector<Node> nodes;
    nodes.reserve(node_order.size());
    for (const auto& id : node_order) nodes.push_back({id, node_weight.at(id)});
    return Network(std::move(nodes), std::move(edges));
}

inline std::string read_stream(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string read_file(const std::string& path) {
    if (path == "-") return read_stream(std::cin);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open file: " + path);
    return read_stream(f);
}

// Sniffs JSON (first significant byte '{') vs TSV edge list.
inline Network load_network(const std::string& path, bool strict = false,
                            const std::optional<std::string>& node_weights_path = std::nullopt) {
    const std::string text = read_file(path);
    std::size_t k = text.find_first_not_of(" \t\r\n");
    if (k != std::string::npos && text[k] == '{') {
        if (node_weights_path)
            throw ValidationError("--node-weights applies only to TSV edge lists");
        return parse_network_json(text, strict);
    }
    std::optional<std::string> node_text;
    if (node_weights_path) node_text = read_file(*node_weights_path);
    return parse_network_tsv(text, node_text);
}

// ---------------------------------------------------------------------------
// serializers

inline ordered_json network_json(const Network& net) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["type"] = "network";
    auto& nodes = j["nodes"] = ordered_json::array();
    for (const Node& n : net.nodes()) nodes.push_back({{"id", n.id}, {"weight", n.weight}});
    auto& edges = j["edges"] = ordered_json::array();
    for (const Edge& e : net.edges())
        edges.push_back({{"id", e.id}, {"source", e.source}, {"target", e.target},
                         {"weight", e.weight}});
    return j;
}

inline ordered_json ranking_json(const Ranking& r) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["type"] = "ranking";
    j["blocks"] = r.blocks;
    return j;
}

inline ordered_json partition_json(const Partition& p) {
    Partition canon = p;
    canonicalize(canon);
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["type"] = "partition";
    j["blocks"] = canon.blocks;
    return j;
}

inline Partition parse_partition_json(const std::string& text) {
    ordered_json j = parse_json_text(text);
    if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
        throw ParseError("partition document must be an object with a \"blocks\" array");
    Partition p;
    std::size_t i = 0;
    for (const auto& bj : j["blocks"]) {
        const std::string where = "blocks[" + std::to_string(i++) + "]";
        if (!bj.is_array()) throw ParseError(where + ": must be an array of node ids");
        std::vector<std::string> block;
        for (const auto& id : bj) {
            if (!id.is_string()) throw ParseError(where + ": node ids must be strings");
            block.push_back(id.get<std::string>());
        }
        p.blocks.push_back(std::move(block));
    }
    return p;
}

namespace detail {

inline ordered_json dendrogram_node_json(const Dendrogram& d, std::size_t ix) {
    const DendrogramNode& n = d.nodes[ix];
    ordered_json j;
    j["members"] = n.members;
    j["step"] = n.step;
    auto& children = j["children"] = ordered_json::array();
    for (std::size_t c : n.children) children.push_back(dendrogram_node_json(d, c));
    return j;
}

}  // namespace detail

inline ordered_json dendrogram_json(const Dendrogram& d) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["type"] = "dendrogram";
    auto& roots = j["roots"] = ordered_json::array();
    for (std::size_t r : d.roots) roots.push_back(detail::dendrogram_node_json(d, r));
    return j;
}

inline ordered_json trace_json(const DeconstructionTrace& t) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["type"] = "trace";
    j["initial_components"] = t.initial.blocks;
    auto& steps = j["steps"] = ordered_json::array();
    for (const DeconstructionStep& s : t.steps) {
        ordered_json sj;
        sj["ranking"] = s.ranking.blocks;
        sj["removed"] = s.removed;
        sj["components"] = s.components.blocks;
        steps.push_back(std::move(sj));
    }
    return j;
}

inline ordered_json rings_json(const RingDecomposition& r) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["type"] = "rings";
    auto& rings = j["rings"] = ordered_json::array();
    for (const Ring& ring : r.rings)
        rings.push_back({{"step", ring.step}, {"members", ring.members}});
    return j;
}

inline ordered_json modularity_json(const ModularityReport& rep) {
    ordered_json j;
    j["value"] = rep.value;
    j["total_weight"] = rep.total_weight;
    j["block_contributions"] = rep.block_contributions;
    return j;
}

inline ordered_json matrix_json(const InfluenceMatrix& m) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["type"] = "matrix";
    j["lambda"] = m.lambda;
    j["index"] = m.index;
    j["rows"] = m.T.rows();
    j["cols"] = m.T.cols();
    auto& data = j["data"] = ordered_json::array();
    for (double v : m.T.data()) data.push_back(v);
    return j;
}

// ---------------------------------------------------------------------------
// DOT export

namespace detail {

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace detail

inline std::string to_dot(const Network& net) {
    std::string out = "digraph {\n";
    for (const Node& n : net.nodes())
        out += "  " + detail::dot_quote(n.id) + " [weight=" +
               detail::dot_quote(format_number(n.weight)) + "];\n";
    for (const Edge& e : net.edges())
        out += "  " + detail::dot_quote(e.source) + " -> " + detail::dot_quote(e.target) +
               " [label=" + detail::dot_quote(e.id) + ", weight=" +
               detail::dot_quote(format_number(e.weight)) + "];\n";
    out += "}\n";
    return out;
}

}  // namespace pwp
