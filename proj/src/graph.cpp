#include "gac/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>

#include "gac/errors.hpp"
#include "json.hpp"

namespace gac {

Graph::Graph(std::vector<std::string> vertices) : vertices_(std::move(vertices)) {
    for (int i = 0; i < vertex_count(); ++i) {
        if (vertices_[i].empty()) throw std::invalid_argument("empty vertex label");
        if (!index_.emplace(vertices_[i], i).second)
            throw std::invalid_argument("duplicate vertex '" + vertices_[i] + "'");
    }
    mult_.assign(static_cast<std::size_t>(vertex_count()) * vertex_count(), ExtNat(0));
}

bool Graph::has_vertex(const std::string& label) const { return index_.count(label) > 0; }

int Graph::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw std::invalid_argument("unknown vertex '" + label + "'");
    return it->second;
}

ExtNat Graph::multiplicity(const std::string& src, const std::string& dst) const {
    return multiplicity(index_of(src), index_of(dst));
}

ExtNat Graph::out_total(int v) const {
    ExtNat t;
    for (int w = 0; w < vertex_count(); ++w) t += multiplicity(v, w);
    return t;
}

ExtNat Graph::in_total(int v) const {
    ExtNat t;
    for (int u = 0; u < vertex_count(); ++u) t += multiplicity(u, v);
    return t;
}

bool Graph::is_finite() const {
    for (const ExtNat& m : mult_)
        if (m.is_infinite()) return false;
    return true;
}

ExtNat Graph::total_edges() const {
    ExtNat t;
    for (const ExtNat& m : mult_) t += m;
    return t;
}

std::uint64_t Graph::bounded_edge_mass() const {
    std::uint64_t t = 0;
    for (const ExtNat& m : mult_) t += m.is_infinite() ? 1 : m.finite_value();
    return t;
}

// ---------------------------------------------------------------------------
// parsing / serialization

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Graph parse_graph(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return graph_from_json_text(text);

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::optional<Graph> graph;
    std::vector<std::pair<int, int>> seen_pairs;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "vertices:") {
            if (graph) throw ParseError(lineno, "repeated vertices: line");
            std::vector<std::string> labels(toks.begin() + 1, toks.end());
            if (labels.empty()) throw ParseError(lineno, "vertices: line lists no vertices");
            try {
                graph.emplace(std::move(labels));
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
        } else if (toks[0] == "edge") {
            if (!graph) throw ParseError(lineno, "edge before vertices: line (undeclared vertex)");
            if (toks.size() != 4)
                throw ParseError(lineno, "expected: edge <src> <dst> <mult>");
            if (!graph->has_vertex(toks[1]))
                throw ParseError(lineno, "undeclared vertex '" + toks[1] + "'");
            if (!graph->has_vertex(toks[2]))
                throw ParseError(lineno, "undeclared vertex '" + toks[2] + "'");
            int s = graph->index_of(toks[1]);
            int d = graph->index_of(toks[2]);
            if (std::find(seen_pairs.begin(), seen_pairs.end(), std::make_pair(s, d)) !=
                seen_pairs.end())
                throw ParseError(lineno, "repeated edge line for pair " + toks[1] + " -> " +
                                             toks[2]);
            if (!toks[3].empty() && toks[3][0] == '-')
                throw ParseError(lineno, "negative multiplicity '" + toks[3] + "'");
            ExtNat m;
            try {
                m = ExtNat::parse(toks[3]);
            } catch (const std::exception& e) {
                throw ParseError(lineno, e.what());
            }
            if (m.is_zero()) throw ParseError(lineno, "multiplicity must be positive");
            graph->set_multiplicity(s, d, m);
            seen_pairs.emplace_back(s, d);
        } else {
            throw ParseError(lineno, "unrecognized line '" + toks[0] + "'");
        }
    }
    if (!graph) throw ParseError(0, "missing vertices: line");
    return *graph;
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream os;
    os << "vertices:";
    for (const std::string& v : g.vertices()) os << " " << v;
    os << "\n";
    for (int s = 0; s < g.vertex_count(); ++s)
        for (int d = 0; d < g.vertex_count(); ++d) {
            ExtNat m = g.multiplicity(s, d);
            if (!m.is_zero())
                os << "edge " << g.vertex(s) << " " << g.vertex(d) << " " << m.to_string() << "\n";
        }
    return os.str();
}

Graph graph_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw ParseError(0, "JSON graph needs a \"vertices\" array");
    std::vector<std::string> labels;
    for (const auto& v : j["vertices"]) {
        if (!v.is_string()) throw ParseError(0, "vertex labels must be strings");
        labels.push_back(v.get<std::string>());
    }
    if (labels.empty()) throw ParseError(0, "JSON graph lists no vertices");
    Graph g(labels);
    std::vector<std::pair<int, int>> seen;
    for (const auto& e : j.value("edges", nlohmann::json::array())) {
        if (!e.is_object() || !e.contains("src") || !e.contains("dst") || !e.contains("mult"))
            throw ParseError(0, "edge records need src, dst, mult");
        std::string src = e["src"].get<std::string>();
        std::string dst = e["dst"].get<std::string>();
        if (!g.has_vertex(src)) throw ParseError(0, "undeclared vertex '" + src + "'");
        if (!g.has_vertex(dst)) throw ParseError(0, "undeclared vertex '" + dst + "'");
        ExtNat m;
        if (e["mult"].is_string()) {
            if (e["mult"].get<std::string>() != "inf")
                throw ParseError(0, "string multiplicity must be \"inf\"");
            m = ExtNat::infinity();
        } else if (e["mult"].is_number_integer()) {
            auto n = e["mult"].get<long long>();
            if (n < 0) throw ParseError(0, "negative multiplicity");
            m = ExtNat(static_cast<std::uint64_t>(n));
        } else {
            throw ParseError(0, "multiplicity must be an integer or \"inf\"");
        }
        if (m.is_zero()) throw ParseError(0, "multiplicity must be positive");
        int s = g.index_of(src), d = g.index_of(dst);
        if (std::find(seen.begin(), seen.end(), std::make_pair(s, d)) != seen.end())
            throw ParseError(0, "repeated edge record for pair " + src + " -> " + dst);
        g.set_multiplicity(s, d, m);
        seen.emplace_back(s, d);
    }
    return g;
}

std::string graph_to_json_text(const Graph& g, int indent) {
    nlohmann::json j;
    j["vertices"] = g.vertices();
    nlohmann::json edges = nlohmann::json::array();
    for (int s = 0; s < g.vertex_count(); ++s)
        for (int d = 0; d < g.vertex_count(); ++d) {
            ExtNat m = g.multiplicity(s, d);
            if (m.is_zero()) continue;
            nlohmann::json e;
            e["src"] = g.vertex(s);
            e["dst"] = g.vertex(d);
            if (m.is_infinite())
                e["mult"] = "inf";
            else
                e["mult"] = m.finite_value();
            edges.push_back(e);
        }
    j["edges"] = edges;
    return j.dump(indent);
}

// ---------------------------------------------------------------------------
// structure

std::vector<std::vector<ExtNat>> vertex_matrix(const Graph& g) {
    int n = g.vertex_count();
    std::vector<std::vector<ExtNat>> a(n, std::vector<ExtNat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = g.multiplicity(i, j);
    return a;
}

VertexClasses classify_vertices(const Graph& g) {
    VertexClasses c;
    for (int v = 0; v < g.vertex_count(); ++v) {
        ExtNat out = g.out_total(v);
        if (out.is_zero())
            c.sinks.push_back(g.vertex(v));
        else if (out.is_infinite())
            c.infinite_emitters.push_back(g.vertex(v));
        else
            c.regular.push_back(g.vertex(v));
    }
    return c;
}

std::vector<std::vector<bool>> reachability(const Graph& g) {
    int n = g.vertex_count();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i][j] = !g.multiplicity(i, j).is_zero();
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (!r[i][k]) continue;
            for (int j = 0; j < n; ++j)
                if (r[k][j]) r[i][j] = true;
        }
    return r;
}

namespace {

// Hereditary saturated subsets other than {} and everything witness a proper
// ideal; enumerated exactly (the artifact operates at desk scale).
bool only_trivial_hereditary_saturated(const Graph& g) {
    int n = g.vertex_count();
    if (n > 16) throw BoundError("simplicity check supports at most 16 vertices");
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        bool hereditary = true;
        for (int v = 0; v < n && hereditary; ++v) {
            if (!(mask >> v & 1)) continue;
            for (int w = 0; w < n; ++w)
                if (!g.multiplicity(v, w).is_zero() && !(mask >> w & 1)) {
                    hereditary = false;
                    break;
                }
        }
        if (!hereditary) continue;
        bool saturated = true;
        for (int v = 0; v < n && saturated; ++v) {
            if (mask >> v & 1) continue;
            ExtNat out = g.out_total(v);
            if (out.is_zero() || out.is_infinite()) continue;  // saturation binds regular only
            bool all_in = true;
            for (int w = 0; w < n; ++w)
                if (!g.multiplicity(v, w).is_zero() && !(mask >> w & 1)) {
                    all_in = false;
                    break;
                }
            if (all_in) saturated = false;
        }
        if (saturated) return false;
    }
    return true;
}

// A cycle with no exit is a cycle lying inside the set of vertices whose total
// out-multiplicity is exactly one.
bool every_cycle_has_exit(const Graph& g) {
    int n = g.vertex_count();
    std::vector<int> next(n, -1);
    for (int v = 0; v < n; ++v) {
        if (g.out_total(v) != ExtNat(1)) continue;
        for (int w = 0; w < n; ++w)
            if (!g.multiplicity(v, w).is_zero()) next[v] = w;
    }
    for (int start = 0; start < n; ++start) {
        int slow = start;
        std::vector<bool> seen(n, false);
        while (slow >= 0 && next[slow] >= 0 && !seen[slow]) {
            seen[slow] = true;
            slow = next[slow];
            if (slow == start) return false;  // exitless cycle through start
        }
    }
    return true;
}

}  // namespace

StructuralReport structural_report(const Graph& g) {
    StructuralReport r;
    int n = g.vertex_count();
    auto reach = reachability(g);

    r.strongly_connected = true;
    for (int i = 0; i < n && r.strongly_connected; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (!reach[i][j] || !reach[j][i])) {
                r.strongly_connected = false;
                break;
            }

    for (int v = 0; v < n; ++v)
        if (reach[v][v]) r.has_cycle = true;

    r.is_single_cycle = r.strongly_connected && r.has_cycle;
    for (int v = 0; v < n && r.is_single_cycle; ++v)
        if (g.out_total(v) != ExtNat(1) || g.in_total(v) != ExtNat(1)) r.is_single_cycle = false;

    // cofinal: every vertex reaches every cycle and every sink
    r.cofinal = true;
    for (int w = 0; w < n && r.cofinal; ++w) {
        bool target = reach[w][w] || g.out_total(w).is_zero();
        if (!target) continue;
        for (int v = 0; v < n; ++v)
            if (v != w && !reach[v][w]) {
                r.cofinal = false;
                break;
            }
    }

    r.condition_L = every_cycle_has_exit(g);
    r.simple = r.condition_L && only_trivial_hereditary_saturated(g);
    r.purely_infinite_simple = r.simple && r.has_cycle;
    r.finite_dimensional = g.is_finite() && !r.has_cycle;
    return r;
}

// ---------------------------------------------------------------------------
// isomorphism

int global_vertex_bound() {
    static int bound = [] {
        if (const char* env = std::getenv("GAC_MAX_VERTICES")) {
            int v = std::atoi(env);
            if (v > 0) return v;
        }
        return 10;
    }();
    return bound;
}

namespace {

// Permutation-invariant vertex signature used to prune the bijection search.
std::string vertex_signature(const Graph& g, int v) {
    std::vector<std::string> outs, ins;
    for (int w = 0; w < g.vertex_count(); ++w) {
        ExtNat o = g.multiplicity(v, w);
        ExtNat i = g.multiplicity(w, v);
        if (!o.is_zero()) outs.push_back(o.to_string());
        if (!i.is_zero()) ins.push_back(i.to_string());
    }
    std::sort(outs.begin(), outs.end());
    std::sort(ins.begin(), ins.end());
    std::string s = g.out_total(v).to_string() + "/" + g.in_total(v).to_string() + "/" +
                    g.multiplicity(v, v).to_string() + "|";
    for (const auto& x : outs) s += x + ",";
    s += "|";
    for (const auto& x : ins) s += x + ",";
    return s;
}

bool extend(const Graph& g, const Graph& h, std::vector<int>& map, std::vector<bool>& used,
            int v, const std::vector<std::vector<int>>& candidates) {
    int n = g.vertex_count();
    if (v == n) return true;
    for (int w : candidates[v]) {
        if (used[w]) continue;
        bool ok = true;
        for (int u = 0; u <= v && ok; ++u) {
            if (map[u] < 0) continue;
            if (g.multiplicity(v, u) != h.multiplicity(w, map[u]) ||
                g.multiplicity(u, v) != h.multiplicity(map[u], w))
                ok = false;
        }
        if (!ok) continue;
        map[v] = w;
        used[w] = true;
        if (extend(g, h, map, used, v + 1, candidates)) return true;
        map[v] = -1;
        used[w] = false;
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const Graph& g, const Graph& h,
                                                 int vertex_bound) {
    if (g.vertex_count() > vertex_bound || h.vertex_count() > vertex_bound)
        throw BoundError("isomorphism check limited to " + std::to_string(vertex_bound) +
                         " vertices (GAC_MAX_VERTICES)");
    int n = g.vertex_count();
    if (n != h.vertex_count()) return std::nullopt;

    std::vector<std::vector<int>> candidates(n);
    for (int v = 0; v < n; ++v) {
        std::string sig = vertex_signature(g, v);
        for (int w = 0; w < n; ++w)
            if (sig == vertex_signature(h, w)) candidates[v].push_back(w);
        if (candidates[v].empty()) return std::nullopt;
    }
    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);
    if (extend(g, h, map, used, 0, candidates)) return map;
    return std::nullopt;
}

bool graphs_isomorphic(const Graph& g, const Graph& h, int vertex_bound) {
    return find_isomorphism(g, h, vertex_bound).has_value();
}

bool graphs_isomorphic(const Graph& g, const Graph& h) {
    return graphs_isomorphic(g, h, global_vertex_bound());
}

}  // namespace gac
