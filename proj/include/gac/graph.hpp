#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gac/extnat.hpp"

namespace gac {

// Directed multigraph with a finite, ordered vertex set and edge
// multiplicities in N + {inf}.  Values are immutable in practice: every
// transformation builds a fresh graph.
class Graph {
public:
    explicit Graph(std::vector<std::string> vertices);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::string& vertex(int i) const { return vertices_[i]; }

    bool has_vertex(const std::string& label) const;
    int index_of(const std::string& label) const;  // throws std::invalid_argument

    ExtNat multiplicity(int src, int dst) const { return mult_[src * vertex_count() + dst]; }
    ExtNat multiplicity(const std::string& src, const std::string& dst) const;
    void set_multiplicity(int src, int dst, ExtNat m) { mult_[src * vertex_count() + dst] = m; }

    ExtNat out_total(int v) const;
    ExtNat in_total(int v) const;

    // true when no multiplicity is infinite (the vertex set is always finite)
    bool is_finite() const;
    ExtNat total_edges() const;

    // Finite edge mass used for search bounds: finite multiplicities summed,
    // each infinite parallel class counting once.
    std::uint64_t bounded_edge_mass() const;

    bool operator==(const Graph&) const = default;

private:
    std::vector<std::string> vertices_;
    std::unordered_map<std::string, int> index_;
    std::vector<ExtNat> mult_;
};

struct VertexClasses {
    std::vector<std::string> regular;
    std::vector<std::string> sinks;
    std::vector<std::string> infinite_emitters;
};

struct StructuralReport {
    bool strongly_connected = false;
    bool has_cycle = false;
    bool is_single_cycle = false;
    bool cofinal = false;
    bool condition_L = false;
    bool simple = false;
    bool purely_infinite_simple = false;
    bool finite_dimensional = false;
};

// Text format:
//   # comment
//   vertices: u v w
//   edge u v 2
//   edge v w inf
// A JSON object {"vertices": [...], "edges": [{"src","dst","mult"}]} with
// "inf" as the infinity sentinel is accepted in place of the text form.
Graph parse_graph(const std::string& text);
std::string serialize_graph(const Graph& g);

Graph graph_from_json_text(const std::string& text);
std::string graph_to_json_text(const Graph& g, int indent = -1);

// The vertex matrix in declared order: entry (v, w) counts edges from v to w.
std::vector<std::vector<ExtNat>> vertex_matrix(const Graph& g);

VertexClasses classify_vertices(const Graph& g);

StructuralReport structural_report(const Graph& g);

// Reachability by paths of length >= 1, as a dense boolean closure.
std::vector<std::vector<bool>> reachability(const Graph& g);

// Brute-force isomorphism over vertex bijections with signature pruning.
// Throws BoundError past the configured vertex bound.
bool graphs_isomorphic(const Graph& g, const Graph& h);
bool graphs_isomorphic(const Graph& g, const Graph& h, int vertex_bound);

// The witness, as a map from g-vertex index to h-vertex index.
std::optional<std::vector<int>> find_isomorphism(const Graph& g, const Graph& h,
                                                 int vertex_bound);

// Global vertex bound: GAC_MAX_VERTICES from the environment, default 10.
int global_vertex_bound();

}  // namespace gac
