#pragma once

#include <algorithm>
#include <bit>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pygon/graph.hpp"
#include "pygon/planting.hpp"

namespace pygon {

// On-disk graph layout (one file per graph):
//
//   line 1   : single-line JSON header, keys in this order:
//              n, p, directed, kind, [q], planted, edges
//   line 2.. : one edge per line, "u v" in decimal, LF terminated.
//              Undirected edges are written once with u < v. Edges are sorted
//              by (u, v).
//
// kind is "none" for a plain host graph (planted is then []); q appears only
// for densegnq.
struct GraphFile {
  Graph graph;
  std::optional<SubgraphKind> kind;
  std::vector<Vertex> planted;

  PlantedInstance to_instance() const {
    if (!kind) throw std::invalid_argument("graph file carries no planted subgraph");
    std::vector<double> labels(graph.n(), 0.0);
    for (auto v : planted) labels[v] = 1.0;
    return PlantedInstance{graph, planted, *kind, std::move(labels)};
  }
};

inline void write_graph(std::ostream& os, const Graph& g,
                        const std::optional<SubgraphKind>& kind,
                        const std::vector<Vertex>& planted) {
  nlohmann::ordered_json header;
  header["n"] = g.n();
  header["p"] = g.p();
  header["directed"] = g.directed();
  header["kind"] = kind ? std::string(to_string(kind->variant)) : std::string("none");
  if (kind && kind->variant == SubgraphVariant::DenseGnq) header["q"] = kind->q;
  header["planted"] = planted;
  header["edges"] = g.edge_count();
  os << header.dump() << '\n';
  for (Vertex u = 0; u < g.n(); ++u) {
    auto row = g.row(u);
    for (std::size_t w = 0; w < row.size(); ++w) {
      for (auto bits = row[w]; bits != 0; bits &= bits - 1) {
        const Vertex v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        if (!g.directed() && v < u) continue;
        os << u << ' ' << v << '\n';
      }
    }
  }
}

inline void write_instance(std::ostream& os, const PlantedInstance& inst) {
  write_graph(os, inst.graph, inst.kind, inst.planted);
}

inline GraphFile read_graph(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("graph file: missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("graph file: bad header: ") + e.what());
  }
  const auto n = header.at("n").get<std::size_t>();
  const auto p = header.at("p").get<double>();
  const auto directed = header.at("directed").get<bool>();
  GraphFile out{Graph(n, directed, p), std::nullopt, {}};
  const auto kind_name = header.at("kind").get<std::string>();
  if (kind_name != "none") {
    SubgraphKind kind{parse_variant(kind_name), 0.0};
    if (kind.variant == SubgraphVariant::DenseGnq) kind.q = header.at("q").get<double>();
    out.kind = kind;
  }
  out.planted = header.at("planted").get<std::vector<Vertex>>();
  std::sort(out.planted.begin(), out.planted.end());
  for (auto v : out.planted) {
    if (v >= n) throw std::runtime_error("graph file: planted vertex out of range");
  }
  std::size_t edges = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Vertex u = 0, v = 0;
    if (!(ls >> u >> v) || u >= n || v >= n || u == v) {
      throw std::runtime_error("graph file: bad edge line '" + line + "'");
    }
    out.graph.set_edge(u, v, true);
    ++edges;
  }
  if (header.contains("edges") && header.at("edges").get<std::size_t>() != edges) {
    throw std::runtime_error("graph file: edge count does not match header");
  }
  return out;
}

inline void save_graph_file(const std::filesystem::path& path, const GraphFile& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_graph(os, f.graph, f.kind, f.planted);
}

inline void save_instance(const std::filesystem::path& path, const PlantedInstance& inst) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_instance(os, inst);
}

inline GraphFile load_graph_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_graph(is);
}

}  // namespace pygon
