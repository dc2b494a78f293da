#pragma once

// Finite connected graphs with an edge involution (every geometric edge is a
// pair {e, ē}) and a positive integer weight on each directed edge. Also
// paths, reduction, enumeration, spanning trees, cycle bases, orientations.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "treezeta/errors.hpp"

namespace treezeta {

using Json = nlohmann::json;

// A vertex or a directed edge of a graph, referenced by canonical index.
struct Site {
    enum class Kind { Vertex, Edge };
    Kind kind = Kind::Vertex;
    std::size_t index = 0;

    static Site vertex(std::size_t i) { return {Kind::Vertex, i}; }
    static Site edge(std::size_t i) { return {Kind::Edge, i}; }
    bool is_vertex() const { return kind == Kind::Vertex; }
    bool is_edge() const { return kind == Kind::Edge; }
    bool operator==(const Site& o) const { return kind == o.kind && index == o.index; }
    bool operator<(const Site& o) const {
        return std::pair(static_cast<int>(kind), index) < std::pair(static_cast<int>(o.kind), o.index);
    }
};

// One directed edge as it appears in an input document.
struct RawEdge {
    std::string name;
    std::string origin;
    std::string terminus;
    std::string inverse;
    long long weight = 1;
};

class WeightedGraph {
public:
    // Validates the raw description and canonicalizes it: vertices and edges
    // are sorted by id, which fixes the matrix index order.
    static WeightedGraph build(std::vector<std::string> vertices, std::vector<RawEdge> edges) {
        WeightedGraph g;
        std::sort(vertices.begin(), vertices.end());
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            if (vertices[i] == vertices[i + 1]) throw ValidationError("duplicate vertex id '" + vertices[i] + "'");
        if (vertices.empty()) throw ValidationError("graph has no vertices");
        std::sort(edges.begin(), edges.end(), [](const RawEdge& a, const RawEdge& b) { return a.name < b.name; });
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            if (edges[i].name == edges[i + 1].name) throw ValidationError("duplicate edge id '" + edges[i].name + "'");
        g.vertex_ids_ = vertices;
        for (std::size_t i = 0; i < vertices.size(); ++i) g.vertex_index_[vertices[i]] = i;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (g.vertex_index_.count(edges[i].name))
                throw ValidationError("id '" + edges[i].name + "' used for both a vertex and an edge");
            g.edge_ids_.push_back(edges[i].name);
            g.edge_index_[edges[i].name] = i;
        }
        const std::size_t m = edges.size();
        g.origin_.resize(m);
        g.inverse_.resize(m);
        g.weight_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const RawEdge& e = edges[i];
            auto o = g.vertex_index_.find(e.origin);
            if (o == g.vertex_index_.end())
                throw ValidationError("dangling origin: edge '" + e.name + "' has unknown origin '" + e.origin + "'");
            if (!g.vertex_index_.count(e.terminus))
                throw ValidationError("dangling terminus: edge '" + e.name + "' has unknown terminus '" + e.terminus + "'");
            auto inv = g.edge_index_.find(e.inverse);
            if (inv == g.edge_index_.end())
                throw ValidationError("non-involutive pairing: edge '" + e.name + "' has unknown inverse '" + e.inverse + "'");
            if (inv->second == i) throw ValidationError("fixed-point inversion: edge '" + e.name + "' is its own inverse");
            if (e.weight < 1) throw ValidationError("non-positive weight on edge '" + e.name + "'");
            g.origin_[i] = o->second;
            g.inverse_[i] = inv->second;
            g.weight_[i] = static_cast<std::uint64_t>(e.weight);
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (g.inverse_[g.inverse_[i]] != i)
                throw ValidationError("non-involutive pairing at edge '" + g.edge_ids_[i] + "'");
            if (g.vertex_ids_[g.origin_[g.inverse_[i]]] != edges[i].terminus)
                throw ValidationError("terminus mismatch: edge '" + g.edge_ids_[i] +
                                      "' declares terminus '" + edges[i].terminus + "' but its inverse starts at '" +
                                      g.vertex_ids_[g.origin_[g.inverse_[i]]] + "'");
        }
        g.out_.assign(vertices.size(), {});
        g.in_.assign(vertices.size(), {});
        for (std::size_t i = 0; i < m; ++i) {
            g.out_[g.origin_[i]].push_back(i);
            g.in_[g.terminus(i)].push_back(i);
        }
        auto reach = g.reachable_from(0);
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (!reach[v]) throw ValidationError("disconnected: vertex '" + g.vertex_ids_[v] + "' is unreachable");
        return g;
    }

    static WeightedGraph from_json(const Json& doc) {
        if (!doc.is_object()) throw ValidationError("graph document must be a JSON object");
        if (!doc.contains("vertices") || !doc["vertices"].is_array())
            throw ValidationError("/vertices: missing or not an array");
        if (!doc.contains("edges") || !doc["edges"].is_array()) throw ValidationError("/edges: missing or not an array");
        std::vector<std::string> vs;
        for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
            const auto& v = doc["vertices"][i];
            if (!v.is_string()) throw ValidationError("/vertices/" + std::to_string(i) + ": not a string");
            vs.push_back(v.get<std::string>());
        }
        std::vector<RawEdge> es;
        for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
            const auto& e = doc["edges"][i];
            std::string where = "/edges/" + std::to_string(i);
            es.push_back(RawEdge{string_field(e, "name", where), string_field(e, "origin", where),
                                 string_field(e, "terminus", where), string_field(e, "inverse", where),
                                 int_field(e, "weight", where)});
        }
        return build(std::move(vs), std::move(es));
    }

    static WeightedGraph load(const std::string& path) { return from_json(read_json_file(path)); }

    Json to_json() const {
        Json doc;
        doc["vertices"] = vertex_ids_;
        doc["edges"] = Json::array();
        for (std::size_t e = 0; e < num_edges(); ++e)
            doc["edges"].push_back({{"name", edge_ids_[e]},
                                    {"origin", vertex_ids_[origin(e)]},
                                    {"terminus", vertex_ids_[terminus(e)]},
                                    {"inverse", edge_ids_[inverse(e)]},
                                    {"weight", weight(e)}});
        return doc;
    }

    std::size_t num_vertices() const { return vertex_ids_.size(); }
    std::size_t num_edges() const { return edge_ids_.size(); }
    std::size_t origin(std::size_t e) const { return origin_[e]; }
    std::size_t terminus(std::size_t e) const { return origin_[inverse_[e]]; }
    std::size_t inverse(std::size_t e) const { return inverse_[e]; }
    std::uint64_t weight(std::size_t e) const { return weight_[e]; }
    bool is_loop(std::size_t e) const { return origin(e) == terminus(e); }
    const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
    const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }
    const std::string& vertex_id(std::size_t v) const { return vertex_ids_[v]; }
    const std::string& edge_id(std::size_t e) const { return edge_ids_[e]; }
    const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
    const std::vector<std::string>& edge_ids() const { return edge_ids_; }

    std::optional<std::size_t> find_vertex(const std::string& id) const {
        auto it = vertex_index_.find(id);
        if (it == vertex_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<std::size_t> find_edge(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t vertex(const std::string& id) const {
        auto v = find_vertex(id);
        if (!v) throw ValidationError("unknown vertex '" + id + "'");
        return *v;
    }
    std::size_t edge(const std::string& id) const {
        auto e = find_edge(id);
        if (!e) throw ValidationError("unknown edge '" + id + "'");
        return *e;
    }
    Site site(const std::string& id) const {
        if (auto v = find_vertex(id)) return Site::vertex(*v);
        if (auto e = find_edge(id)) return Site::edge(*e);
        throw ValidationError("unknown vertex or edge '" + id + "'");
    }
    const std::string& site_id(const Site& s) const { return s.is_vertex() ? vertex_id(s.index) : edge_id(s.index); }
    std::vector<Site> all_sites() const {
        std::vector<Site> r;
        for (std::size_t v = 0; v < num_vertices(); ++v) r.push_back(Site::vertex(v));
        for (std::size_t e = 0; e < num_edges(); ++e) r.push_back(Site::edge(e));
        return r;
    }

    // Vertices reachable from v.
    std::vector<bool> reachable_from(std::size_t v) const {
        std::vector<bool> seen(num_vertices(), false);
        std::vector<std::size_t> stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t e : out_[x])
                if (!seen[terminus(e)]) {
                    seen[terminus(e)] = true;
                    stack.push_back(terminus(e));
                }
        }
        return seen;
    }

    // The subgraph spanned by a set of edge ids and vertex ids. Endpoints of
    // the edges are added automatically. Throws if the result is not a valid
    // connected graph, for example when an edge is kept without its inverse.
    WeightedGraph subgraph(const std::set<std::string>& edges, const std::set<std::string>& extra_vertices = {}) const {
        std::set<std::string> vs(extra_vertices);
        std::vector<RawEdge> raw;
        for (const auto& id : edges) {
            std::size_t e = edge(id);
            if (!edges.count(edge_id(inverse(e))))
                throw ValidationError("subgraph keeps edge '" + id + "' without its inverse");
            vs.insert(vertex_id(origin(e)));
            raw.push_back(RawEdge{id, vertex_id(origin(e)), vertex_id(terminus(e)), edge_id(inverse(e)),
                                  static_cast<long long>(weight(e))});
        }
        for (const auto& v : vs) vertex(v);
        return build(std::vector<std::string>(vs.begin(), vs.end()), std::move(raw));
    }

    // Same graph with the weights replaced.
    WeightedGraph with_weights(const std::vector<std::uint64_t>& w) const {
        if (w.size() != num_edges()) throw ValidationError("weight vector has the wrong length");
        WeightedGraph g(*this);
        for (auto x : w)
            if (x < 1) throw ValidationError("non-positive weight");
        g.weight_ = w;
        return g;
    }

    static Json read_json_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open '" + path + "'");
        try {
            return Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw ValidationError("JSON parse error in '" + path + "': " + e.what());
        }
    }

    static std::string string_field(const Json& obj, const char* key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string())
            throw ValidationError(where + "/" + key + ": missing or not a string");
        return obj[key].get<std::string>();
    }
    static long long int_field(const Json& obj, const char* key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number_integer())
            throw ValidationError(where + "/" + key + ": missing or not an integer");
        return obj[key].get<long long>();
    }

private:
    std::vector<std::string> vertex_ids_;
    std::vector<std::string> edge_ids_;
    std::map<std::string, std::size_t> vertex_index_;
    std::map<std::string, std::size_t> edge_index_;
    std::vector<std::size_t> origin_;
    std::vector<std::size_t> inverse_;
    std::vector<std::uint64_t> weight_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

// A path given by its start vertex and its edge sequence. The empty edge
// sequence is the trivial path at the start vertex.
struct Path {
    std::size_t start = 0;
    std::vector<std::size_t> edges;

    std::size_t length() const { return edges.size(); }
    bool operator==(const Path& o) const { return start == o.start && edges == o.edges; }
    bool operator<(const Path& o) const {
        if (edges.size() != o.edges.size()) return edges.size() < o.edges.size();
        if (start != o.start) return start < o.start;
        return edges < o.edges;
    }
};

inline void validate_path(const WeightedGraph& g, const Path& p) {
    if (p.start >= g.num_vertices()) throw ValidationError("path start out of range");
    std::size_t at = p.start;
    for (std::size_t e : p.edges) {
        if (e >= g.num_edges()) throw ValidationError("path edge out of range");
        if (g.origin(e) != at) throw ValidationError("path is not consecutive at edge '" + g.edge_id(e) + "'");
        at = g.terminus(e);
    }
}

inline Path path_from_edges(const WeightedGraph& g, const std::vector<std::size_t>& edges) {
    if (edges.empty()) throw ValidationError("an edge list without a start vertex must be non-empty");
    Path p{g.origin(edges.front()), edges};
    validate_path(g, p);
    return p;
}

inline std::size_t path_end(const WeightedGraph& g, const Path& p) {
    return p.edges.empty() ? p.start : g.terminus(p.edges.back());
}

inline Path path_compose(const WeightedGraph& g, const Path& p, const Path& q) {
    if (path_end(g, p) != q.start)
        throw ValidationError("cannot compose paths: '" + g.vertex_id(path_end(g, p)) + "' != '" +
                              g.vertex_id(q.start) + "'");
    Path r = p;
    r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
    return r;
}

inline Path path_reverse(const WeightedGraph& g, const Path& p) {
    Path r{path_end(g, p), {}};
    for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) r.edges.push_back(g.inverse(*it));
    return r;
}

inline bool is_reduced(const WeightedGraph& g, const Path& p) {
    for (std::size_t i = 0; i + 1 < p.edges.size(); ++i)
        if (p.edges[i + 1] == g.inverse(p.edges[i])) return false;
    return true;
}

inline std::string format_path(const WeightedGraph& g, const Path& p) {
    if (p.edges.empty()) return "O_" + g.vertex_id(p.start);
    std::string s = "(";
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (i) s += ",";
        s += g.edge_id(p.edges[i]);
    }
    return s + ")";
}

// Visits every path (reduced or not) of length at most max_len starting at a
// vertex, or starting with a given edge, in (length, lexicographic) order.
inline void for_each_path(const WeightedGraph& g, const Site& start, long max_len,
                          const std::function<void(const Path&)>& visit) {
    if (max_len < 0) return;
    std::vector<Path> layer;
    if (start.is_vertex()) {
        layer.push_back(Path{start.index, {}});
    } else {
        if (max_len < 1) return;
        layer.push_back(Path{g.origin(start.index), {start.index}});
    }
    long len = static_cast<long>(layer.front().length());
    while (!layer.empty()) {
        for (const auto& p : layer) visit(p);
        if (len == max_len) break;
        std::vector<Path> next;
        for (const auto& p : layer)
            for (std::size_t e : g.out_edges(path_end(g, p))) {
                Path q = p;
                q.edges.push_back(e);
                next.push_back(std::move(q));
            }
        layer = std::move(next);
        ++len;
    }
}

inline std::vector<Path> enumerate_paths(const WeightedGraph& g, const Site& start, long max_len) {
    std::vector<Path> out;
    for_each_path(g, start, max_len, [&](const Path& p) { out.push_back(p); });
    return out;
}

// Breadth-first spanning tree from the least vertex. Neighbours are explored
// in edge order, so the tree is deterministic.
struct SpanningTree {
    std::size_t root = 0;
    std::vector<bool> in_tree;                 // per edge, both members of a tree pair
    std::vector<std::optional<std::size_t>> parent_edge;  // edge from parent into v
    std::vector<std::size_t> depth;
};

inline SpanningTree spanning_tree(const WeightedGraph& g) {
    SpanningTree t;
    t.root = 0;
    t.in_tree.assign(g.num_edges(), false);
    t.parent_edge.assign(g.num_vertices(), std::nullopt);
    t.depth.assign(g.num_vertices(), 0);
    std::vector<bool> seen(g.num_vertices(), false);
    std::deque<std::size_t> queue{t.root};
    seen[t.root] = true;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t e : g.out_edges(v)) {
            std::size_t w = g.terminus(e);
            if (seen[w]) continue;
            seen[w] = true;
            t.parent_edge[w] = e;
            t.depth[w] = t.depth[v] + 1;
            t.in_tree[e] = t.in_tree[g.inverse(e)] = true;
            queue.push_back(w);
        }
    }
    return t;
}

// The unique reduced path from x to y inside the spanning tree.
inline Path tree_path(const WeightedGraph& g, const SpanningTree& t, std::size_t x, std::size_t y) {
    std::vector<std::size_t> up;    // edges from x upward, oriented toward the root
    std::vector<std::size_t> down;  // edges from the root side downward to y
    std::size_t a = x, b = y;
    while (t.depth[a] > t.depth[b]) {
        up.push_back(g.inverse(*t.parent_edge[a]));
        a = g.origin(*t.parent_edge[a]);
    }
    while (t.depth[b] > t.depth[a]) {
        down.push_back(*t.parent_edge[b]);
        b = g.origin(*t.parent_edge[b]);
    }
    while (a != b) {
        up.push_back(g.inverse(*t.parent_edge[a]));
        a = g.origin(*t.parent_edge[a]);
        down.push_back(*t.parent_edge[b]);
        b = g.origin(*t.parent_edge[b]);
    }
    Path p{x, up};
    p.edges.insert(p.edges.end(), down.rbegin(), down.rend());
    return p;
}

// Representatives of the edge pairs outside the spanning tree: the member
// with the smaller index.
inline std::vector<std::size_t> non_tree_representatives(const WeightedGraph& g, const SpanningTree& t) {
    std::vector<std::size_t> r;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (!t.in_tree[e] && e < g.inverse(e)) r.push_back(e);
    return r;
}

// One closed path per non-tree edge pair: root → o(e), then e, then back to
// the root inside the tree. Their balance decides balance of all closed paths.
inline std::vector<Path> fundamental_cycles(const WeightedGraph& g) {
    SpanningTree t = spanning_tree(g);
    std::vector<Path> out;
    for (std::size_t e : non_tree_representatives(g, t)) {
        Path p = tree_path(g, t, t.root, g.origin(e));
        p.edges.push_back(e);
        Path back = tree_path(g, t, g.terminus(e), t.root);
        p.edges.insert(p.edges.end(), back.edges.begin(), back.edges.end());
        out.push_back(std::move(p));
    }
    return out;
}

// A spanning tree together with an orientation whose tree part has origin
// map a bijection onto the vertices other than c: each tree edge points
// toward c. Non-tree pairs are oriented toward their smaller-index member.
struct OrientedSpanning {
    SpanningTree tree;
    std::size_t center = 0;
    std::vector<bool> positive;  // per edge
};

inline OrientedSpanning oriented_spanning(const WeightedGraph& g, std::size_t c) {
    OrientedSpanning os;
    os.tree = spanning_tree(g);
    os.center = c;
    os.positive.assign(g.num_edges(), false);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        if (v == c) continue;
        Path p = tree_path(g, os.tree, v, c);
        os.positive[p.edges.front()] = true;
    }
    for (std::size_t e : non_tree_representatives(g, os.tree)) os.positive[e] = true;
    return os;
}

// True iff the graph has a cycle of length at least 2, which happens exactly
// when the non-loop edge pairs do not form a tree.
inline bool has_long_cycle(const WeightedGraph& g) {
    std::size_t pairs = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (!g.is_loop(e) && e < g.inverse(e)) ++pairs;
    return pairs > g.num_vertices() - 1;
}

// The graph with every 1-loop removed. Only defined without long cycles, in
// which case the result is the unique maximal subtree.
inline WeightedGraph loopless_subtree(const WeightedGraph& g) {
    if (has_long_cycle(g)) throw SettingError("loopless_subtree: graph has a cycle of length >= 2");
    std::set<std::string> keep;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (!g.is_loop(e)) keep.insert(g.edge_id(e));
    return g.subgraph(keep, {g.vertex_id(0)});
}

}  // namespace treezeta
