#pragma once

// Local action diagrams: a weighted graph whose edges carry disjoint colour
// sets, with a finite permutation group at each vertex whose orbits are the
// colour sets of the outgoing edges. Provides inversions, reduced colour
// paths, the standard weights W and W_rev, the colour transfer operator F,
// the zeta function of the associated tree action, its truncated series, the
// full-symmetric companion diagram and a truncated explicit tree oracle.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "treezeta/errors.hpp"
#include "treezeta/graph.hpp"
#include "treezeta/matrix.hpp"
#include "treezeta/perm.hpp"
#include "treezeta/scalar.hpp"
#include "treezeta/weights.hpp"
#include "treezeta/zeta.hpp"

namespace treezeta {

inline constexpr std::size_t kNoColor = std::numeric_limits<std::size_t>::max();

// Raw description of one diagram edge.
struct RawLadEdge {
    std::string name;
    std::string origin;
    std::string terminus;
    std::string inverse;
    std::vector<std::string> colors;
};

class LocalActionDiagram {
public:
    // Generators are given per vertex as maps colour → colour over X_c;
    // colours missing from a map are fixed.
    using RawGenerators = std::map<std::string, std::vector<std::map<std::string, std::string>>>;

    static LocalActionDiagram build(std::vector<std::string> vertices, std::vector<RawLadEdge> edges,
                                    const RawGenerators& generators, std::size_t cap = kDefaultGroupCap) {
        LocalActionDiagram d;
        std::vector<RawEdge> raw;
        for (const auto& e : edges) {
            if (e.colors.empty()) throw ValidationError("edge '" + e.name + "' has an empty colour set");
            raw.push_back(RawEdge{e.name, e.origin, e.terminus, e.inverse, static_cast<long long>(e.colors.size())});
        }
        d.graph_ = WeightedGraph::build(std::move(vertices), std::move(raw));
        const WeightedGraph& g = d.graph_;

        std::map<std::string, std::vector<std::string>> colors_by_edge;
        for (const auto& e : edges) colors_by_edge[e.name] = e.colors;
        d.edge_colors_.assign(g.num_edges(), {});
        for (std::size_t a = 0; a < g.num_edges(); ++a) {
            std::vector<std::string> cs = colors_by_edge[g.edge_id(a)];
            std::sort(cs.begin(), cs.end());
            for (const auto& c : cs) {
                if (d.color_index_.count(c))
                    throw ValidationError("colour '" + c + "' appears in more than one colour set");
                std::size_t idx = d.color_ids_.size();
                d.color_index_[c] = idx;
                d.color_ids_.push_back(c);
                d.color_edge_.push_back(a);
                d.edge_colors_[a].push_back(idx);
            }
        }
        d.vertex_colors_.assign(g.num_vertices(), {});
        d.local_index_.assign(d.color_ids_.size(), 0);
        for (std::size_t v = 0; v < g.num_vertices(); ++v)
            for (std::size_t a : g.out_edges(v))
                for (std::size_t x : d.edge_colors_[a]) {
                    d.local_index_[x] = d.vertex_colors_[v].size();
                    d.vertex_colors_[v].push_back(x);
                }
        for (const auto& [vid, _] : generators)
            if (!g.find_vertex(vid)) throw ValidationError("/groups/" + vid + ": unknown vertex");
        for (std::size_t v = 0; v < g.num_vertices(); ++v) {
            std::vector<Permutation> gens;
            auto it = generators.find(g.vertex_id(v));
            if (it != generators.end())
                for (std::size_t k = 0; k < it->second.size(); ++k)
                    gens.push_back(d.local_permutation(v, it->second[k],
                                                       "/groups/" + g.vertex_id(v) + "/generators/" + std::to_string(k)));
            d.groups_.emplace_back(d.vertex_colors_[v].size(), std::move(gens), cap);
        }
        d.check_orbits();
        return d;
    }

    // Diagram with explicit local groups given as permutations of the local
    // colour indices at each vertex.
    static LocalActionDiagram with_groups(const LocalActionDiagram& base, std::vector<PermGroup> groups) {
        LocalActionDiagram d = base;
        if (groups.size() != d.graph_.num_vertices()) throw ValidationError("one group per vertex is required");
        for (std::size_t v = 0; v < groups.size(); ++v)
            if (groups[v].degree() != d.vertex_colors_[v].size())
                throw ValidationError("group degree does not match |X_c| at '" + d.graph_.vertex_id(v) + "'");
        d.groups_ = std::move(groups);
        d.check_orbits();
        return d;
    }

    static LocalActionDiagram from_json(const Json& doc, std::size_t cap = kDefaultGroupCap) {
        if (!doc.is_object()) throw ValidationError("diagram document must be a JSON object");
        if (!doc.contains("vertices") || !doc["vertices"].is_array())
            throw ValidationError("/vertices: missing or not an array");
        if (!doc.contains("edges") || !doc["edges"].is_array()) throw ValidationError("/edges: missing or not an array");
        std::vector<std::string> vs;
        RawGenerators gens;
        auto read_group = [&](const std::string& vid, const Json& grp, const std::string& where) {
            if (!grp.is_object() || !grp.contains("generators") || !grp["generators"].is_array())
                throw ValidationError(where + "/generators: missing or not an array");
            auto& list = gens[vid];
            for (std::size_t k = 0; k < grp["generators"].size(); ++k) {
                const Json& m = grp["generators"][k];
                std::string w = where + "/generators/" + std::to_string(k);
                if (!m.is_object()) throw ValidationError(w + ": generator must be an object mapping colours");
                std::map<std::string, std::string> mp;
                for (auto it = m.begin(); it != m.end(); ++it) {
                    if (!it.value().is_string()) throw ValidationError(w + "/" + it.key() + ": not a string");
                    mp[it.key()] = it.value().get<std::string>();
                }
                list.push_back(std::move(mp));
            }
        };
        for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
            const Json& v = doc["vertices"][i];
            std::string where = "/vertices/" + std::to_string(i);
            if (v.is_string()) {
                vs.push_back(v.get<std::string>());
            } else if (v.is_object()) {
                std::string id = WeightedGraph::string_field(v, "id", where);
                vs.push_back(id);
                if (v.contains("group")) read_group(id, v["group"], where + "/group");
            } else {
                throw ValidationError(where + ": expected a string or an object");
            }
        }
        if (doc.contains("groups")) {
            if (!doc["groups"].is_object()) throw ValidationError("/groups: not an object");
            for (auto it = doc["groups"].begin(); it != doc["groups"].end(); ++it)
                read_group(it.key(), it.value(), "/groups/" + it.key());
        }
        std::vector<RawLadEdge> es;
        for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
            const Json& e = doc["edges"][i];
            std::string where = "/edges/" + std::to_string(i);
            RawLadEdge r{WeightedGraph::string_field(e, "name", where), WeightedGraph::string_field(e, "origin", where),
                         WeightedGraph::string_field(e, "terminus", where),
                         WeightedGraph::string_field(e, "inverse", where), {}};
            if (!e.contains("colors") || !e["colors"].is_array())
                throw ValidationError(where + "/colors: missing or not an array");
            for (std::size_t k = 0; k < e["colors"].size(); ++k) {
                if (!e["colors"][k].is_string())
                    throw ValidationError(where + "/colors/" + std::to_string(k) + ": not a string");
                r.colors.push_back(e["colors"][k].get<std::string>());
            }
            es.push_back(std::move(r));
        }
        return build(std::move(vs), std::move(es), gens, cap);
    }

    Json to_json() const {
        Json doc;
        doc["vertices"] = Json::array();
        for (std::size_t v = 0; v < graph_.num_vertices(); ++v) {
            Json gens = Json::array();
            for (const auto& p : groups_[v].generators()) {
                Json m = Json::object();
                for (std::size_t i = 0; i < p.size(); ++i)
                    if (p[i] != i) m[color_ids_[vertex_colors_[v][i]]] = color_ids_[vertex_colors_[v][p[i]]];
                gens.push_back(m);
            }
            doc["vertices"].push_back({{"id", graph_.vertex_id(v)}, {"group", {{"generators", gens}}}});
        }
        doc["edges"] = Json::array();
        for (std::size_t a = 0; a < graph_.num_edges(); ++a) {
            Json cs = Json::array();
            for (std::size_t x : edge_colors_[a]) cs.push_back(color_ids_[x]);
            doc["edges"].push_back({{"name", graph_.edge_id(a)},
                                    {"origin", graph_.vertex_id(graph_.origin(a))},
                                    {"terminus", graph_.vertex_id(graph_.terminus(a))},
                                    {"inverse", graph_.edge_id(graph_.inverse(a))},
                                    {"colors", cs}});
        }
        return doc;
    }

    const WeightedGraph& graph() const { return graph_; }
    std::size_t num_colors() const { return color_ids_.size(); }
    const std::string& color_id(std::size_t x) const { return color_ids_[x]; }
    std::size_t color(const std::string& id) const {
        auto it = color_index_.find(id);
        if (it == color_index_.end()) throw ValidationError("unknown colour '" + id + "'");
        return it->second;
    }
    bool has_color(const std::string& id) const { return color_index_.count(id) > 0; }
    std::size_t color_edge(std::size_t x) const { return color_edge_[x]; }
    const std::vector<std::size_t>& edge_colors(std::size_t a) const { return edge_colors_[a]; }
    const std::vector<std::size_t>& vertex_colors(std::size_t v) const { return vertex_colors_[v]; }
    std::size_t local_index(std::size_t x) const { return local_index_[x]; }
    const PermGroup& group(std::size_t v) const { return groups_[v]; }
    // Vertex at which the colour's edge starts, and the one where it ends.
    std::size_t color_origin(std::size_t x) const { return graph_.origin(color_edge_[x]); }
    std::size_t color_terminus(std::size_t x) const { return graph_.terminus(color_edge_[x]); }

private:
    Permutation local_permutation(std::size_t v, const std::map<std::string, std::string>& m,
                                  const std::string& where) const {
        Permutation p = identity_permutation(vertex_colors_[v].size());
        for (const auto& [from, to] : m) {
            auto f = color_index_.find(from);
            auto t = color_index_.find(to);
            if (f == color_index_.end() || color_origin(f->second) != v)
                throw ValidationError(where + "/" + from + ": colour is not in X_" + graph_.vertex_id(v));
            if (t == color_index_.end() || color_origin(t->second) != v)
                throw ValidationError(where + "/" + from + ": image '" + to + "' is not in X_" + graph_.vertex_id(v));
            p[local_index_[f->second]] = static_cast<std::uint32_t>(local_index_[t->second]);
        }
        if (!is_permutation(p)) throw ValidationError(where + ": mapping is not a bijection");
        return p;
    }

    void check_orbits() const {
        for (std::size_t v = 0; v < graph_.num_vertices(); ++v) {
            std::vector<std::vector<std::size_t>> expected;
            for (std::size_t a : graph_.out_edges(v)) {
                std::vector<std::size_t> block;
                for (std::size_t x : edge_colors_[a]) block.push_back(local_index_[x]);
                std::sort(block.begin(), block.end());
                expected.push_back(block);
            }
            std::sort(expected.begin(), expected.end());
            auto got = groups_[v].orbits();
            std::sort(got.begin(), got.end());
            if (got != expected) {
                std::string part;
                for (const auto& o : got) {
                    part += part.empty() ? "{" : " {";
                    for (std::size_t i = 0; i < o.size(); ++i)
                        part += (i ? "," : "") + color_ids_[vertex_colors_[v][o[i]]];
                    part += "}";
                }
                throw ValidationError("orbit mismatch at vertex '" + graph_.vertex_id(v) +
                                      "': group orbits are " + part);
            }
        }
    }

    WeightedGraph graph_;
    std::vector<std::string> color_ids_;
    std::map<std::string, std::size_t> color_index_;
    std::vector<std::size_t> color_edge_;
    std::vector<std::vector<std::size_t>> edge_colors_;
    std::vector<std::vector<std::size_t>> vertex_colors_;
    std::vector<std::size_t> local_index_;
    std::vector<PermGroup> groups_;
};

// A map on colours sending X_a into X_ā. Need not be an involution.
struct Inversion {
    std::vector<std::size_t> image;
    std::size_t operator()(std::size_t x) const { return image[x]; }
};

inline Inversion validate_inversion(const LocalActionDiagram& d, const std::vector<std::size_t>& image) {
    if (image.size() != d.num_colors()) throw ValidationError("inversion must be defined on every colour");
    const WeightedGraph& g = d.graph();
    for (std::size_t x = 0; x < image.size(); ++x) {
        if (image[x] >= d.num_colors()) throw ValidationError("inversion image out of range");
        if (d.color_edge(image[x]) != g.inverse(d.color_edge(x)))
            throw ValidationError("inversion sends colour '" + d.color_id(x) + "' outside X of the reverse edge");
    }
    return Inversion{image};
}

inline Inversion inversion_from_json(const LocalActionDiagram& d, const Json& m) {
    if (!m.is_object()) throw ValidationError("/inversion: not an object");
    std::vector<std::size_t> image(d.num_colors(), kNoColor);
    for (auto it = m.begin(); it != m.end(); ++it) {
        if (!d.has_color(it.key())) throw ValidationError("/inversion/" + it.key() + ": unknown colour");
        if (!it.value().is_string() || !d.has_color(it.value().get<std::string>()))
            throw ValidationError("/inversion/" + it.key() + ": image is not a known colour");
        image[d.color(it.key())] = d.color(it.value().get<std::string>());
    }
    for (std::size_t x = 0; x < image.size(); ++x)
        if (image[x] == kNoColor) throw ValidationError("/inversion: colour '" + d.color_id(x) + "' has no image");
    return validate_inversion(d, image);
}

// Pairs the i-th colour of X_a with the i-th colour of X_ā.
inline Inversion default_inversion(const LocalActionDiagram& d) {
    const WeightedGraph& g = d.graph();
    std::vector<std::size_t> image(d.num_colors());
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const auto& xs = d.edge_colors(a);
        const auto& ys = d.edge_colors(g.inverse(a));
        if (xs.size() != ys.size())
            throw ValidationError("edge '" + g.edge_id(a) + "' and its inverse have colour sets of different sizes; "
                                  "an explicit inversion is required");
        for (std::size_t i = 0; i < xs.size(); ++i) image[xs[i]] = ys[i];
    }
    return validate_inversion(d, image);
}

// Sends the i-th colour of X_a to the (i mod |X_ā|)-th colour of X_ā. Valid
// for any sizes; agrees with default_inversion when the sizes match.
inline Inversion wrapping_inversion(const LocalActionDiagram& d) {
    const WeightedGraph& g = d.graph();
    std::vector<std::size_t> image(d.num_colors());
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const auto& xs = d.edge_colors(a);
        const auto& ys = d.edge_colors(g.inverse(a));
        for (std::size_t i = 0; i < xs.size(); ++i) image[xs[i]] = ys[i % ys.size()];
    }
    return validate_inversion(d, image);
}

struct LadInput {
    LocalActionDiagram diagram;
    Inversion inversion;
};

inline LadInput load_lad(const Json& doc) {
    LocalActionDiagram d = LocalActionDiagram::from_json(doc);
    Inversion iota = doc.contains("inversion") ? inversion_from_json(d, doc["inversion"]) : default_inversion(d);
    return {std::move(d), std::move(iota)};
}

inline LadInput load_lad_file(const std::string& path) { return load_lad(WeightedGraph::read_json_file(path)); }

// ---------------------------------------------------------------------------
// Standard weights.

inline bool colors_composable(const LocalActionDiagram& d, std::size_t x, std::size_t y) {
    return d.color_terminus(x) == d.color_origin(y);
}

// W(x,y) = |Stab_{G(t(a))}(ι(x))·y| when t(a) = o(b), else 0.
inline std::uint64_t weight_W(const LocalActionDiagram& d, const Inversion& iota, std::size_t x, std::size_t y) {
    if (x >= d.num_colors() || y >= d.num_colors()) throw ValidationError("colour out of range");
    if (!colors_composable(d, x, y)) return 0;
    std::size_t c = d.color_origin(y);
    return d.group(c).stab_orbit_size(d.local_index(iota(x)), d.local_index(y));
}

// W_rev(x,y) = |Stab_{G(o(a))}(x)·y| when o(a) = o(b), else 0.
inline std::uint64_t weight_W_rev(const LocalActionDiagram& d, std::size_t x, std::size_t y) {
    if (x >= d.num_colors() || y >= d.num_colors()) throw ValidationError("colour out of range");
    if (d.color_origin(x) != d.color_origin(y)) return 0;
    return d.group(d.color_origin(x)).stab_orbit_size(d.local_index(x), d.local_index(y));
}

// A colour sequence; an empty sequence is the trivial path at the anchor.
struct DeltaPath {
    std::size_t anchor = 0;
    std::vector<std::size_t> colors;
    std::size_t length() const { return colors.size(); }
};

// True when consecutive colours sit on a valid path of the base graph.
inline bool is_delta_path(const LocalActionDiagram& d, const DeltaPath& p) {
    for (std::size_t i = 0; i + 1 < p.colors.size(); ++i)
        if (!colors_composable(d, p.colors[i], p.colors[i + 1])) return false;
    if (!p.colors.empty() && d.color_origin(p.colors.front()) != p.anchor) return false;
    return true;
}

inline bool is_reduced_delta_path(const LocalActionDiagram& d, const Inversion& iota, const DeltaPath& p) {
    if (!is_delta_path(d, p)) return false;
    for (std::size_t i = 0; i + 1 < p.colors.size(); ++i)
        if (p.colors[i + 1] == iota(p.colors[i])) return false;
    return true;
}

// 1 for length ≤ 1, else the product of W over consecutive colours.
inline Integer delta_path_weight(const LocalActionDiagram& d, const Inversion& iota, const DeltaPath& p) {
    Integer r(1);
    for (std::size_t i = 0; i + 1 < p.colors.size(); ++i)
        r *= static_cast<unsigned long>(weight_W(d, iota, p.colors[i], p.colors[i + 1]));
    return r;
}

// Underlying base-graph path of a colour path.
inline Path underlying_path(const LocalActionDiagram& d, const DeltaPath& p) {
    Path q{p.anchor, {}};
    for (std::size_t x : p.colors) q.edges.push_back(d.color_edge(x));
    return q;
}

// Visits the reduced colour paths of length ≤ max_len. From a vertex the
// trivial path comes first, then paths starting at any colour of X_c; from a
// list of colours, paths of length ≥ 1 starting at one of them. Order is by
// length, then lexicographic in colour index.
inline void for_each_reduced_delta_path(const LocalActionDiagram& d, const Inversion& iota,
                                        std::optional<std::size_t> from_vertex,
                                        const std::vector<std::size_t>& from_colors, long max_len,
                                        const std::function<void(const DeltaPath&)>& visit) {
    if (max_len < 0) return;
    std::vector<DeltaPath> layer;
    if (from_vertex) {
        visit(DeltaPath{*from_vertex, {}});
        for (std::size_t x : d.vertex_colors(*from_vertex)) layer.push_back(DeltaPath{*from_vertex, {x}});
    } else {
        for (std::size_t x : from_colors) layer.push_back(DeltaPath{d.color_origin(x), {x}});
    }
    std::sort(layer.begin(), layer.end(), [](const DeltaPath& a, const DeltaPath& b) { return a.colors < b.colors; });
    for (long len = 1; len <= max_len && !layer.empty(); ++len) {
        for (const auto& p : layer) visit(p);
        if (len == max_len) break;
        std::vector<DeltaPath> next;
        for (const auto& p : layer) {
            std::size_t last = p.colors.back();
            for (std::size_t y : d.vertex_colors(d.color_terminus(last))) {
                if (y == iota(last)) continue;
                DeltaPath q = p;
                q.colors.push_back(y);
                next.push_back(std::move(q));
            }
        }
        std::sort(next.begin(), next.end(), [](const DeltaPath& a, const DeltaPath& b) { return a.colors < b.colors; });
        layer = std::move(next);
    }
}

inline std::vector<DeltaPath> enumerate_reduced_delta_paths(const LocalActionDiagram& d, const Inversion& iota,
                                                            std::optional<std::size_t> from_vertex,
                                                            const std::vector<std::size_t>& from_colors,
                                                            long max_len) {
    std::vector<DeltaPath> out;
    for_each_reduced_delta_path(d, iota, from_vertex, from_colors, max_len,
                                [&](const DeltaPath& p) { out.push_back(p); });
    return out;
}

// For every a, b in o⁻¹(c) and x in X_a: Stab(x) is transitive on X_b∖{x}.
inline bool condition_diamond(const LocalActionDiagram& d, std::size_t c) {
    const WeightedGraph& g = d.graph();
    const PermGroup& G = d.group(c);
    for (std::size_t x : d.vertex_colors(c)) {
        const auto& sizes = G.stab_orbit_sizes(d.local_index(x));
        for (std::size_t b : g.out_edges(c)) {
            std::size_t want = d.edge_colors(b).size() - (d.color_edge(x) == b ? 1 : 0);
            for (std::size_t y : d.edge_colors(b)) {
                if (y == x) continue;
                if (sizes[d.local_index(y)] != want) return false;
            }
        }
    }
    return true;
}

// (∗_k) for the diagram by exhaustive enumeration: every reduced colour path
// of length k+1 has W ≥ 2.
inline void require_pclosed_basics(const LocalActionDiagram& d, const Inversion& iota, const char* what) {
    const WeightedGraph& g = d.graph();
    for (std::size_t a = 0; a < g.num_edges(); ++a)
        if (d.edge_colors(a).size() < 2)
            throw SettingError(std::string(what) + ": |X_" + g.edge_id(a) + "| < 2");
    for (std::size_t x = 0; x < d.num_colors(); ++x)
        for (std::size_t y : d.vertex_colors(d.color_terminus(x)))
            if (y != iota(x) && weight_W(d, iota, x, y) < 1)
                throw SettingError(std::string(what) + ": W vanishes on a composable pair");
}

inline bool star_k_pclosed(const LocalActionDiagram& d, const Inversion& iota, long k) {
    if (k < 1) throw ValidationError("star_k_pclosed: k must be at least 1");
    require_pclosed_basics(d, iota, "star_k_pclosed");
    std::vector<std::size_t> all(d.num_colors());
    for (std::size_t x = 0; x < all.size(); ++x) all[x] = x;
    bool ok = true;
    for_each_reduced_delta_path(d, iota, std::nullopt, all, k + 1, [&](const DeltaPath& p) {
        if (ok && static_cast<long>(p.length()) == k + 1 && delta_path_weight(d, iota, p) < 2) ok = false;
    });
    return ok;
}

// Reduced steps x → y with W(x,y) = 1, as adjacency lists over colours.
inline std::vector<std::vector<std::size_t>> unit_weight_steps(const LocalActionDiagram& d, const Inversion& iota) {
    std::vector<std::vector<std::size_t>> next(d.num_colors());
    for (std::size_t x = 0; x < d.num_colors(); ++x)
        for (std::size_t y : d.vertex_colors(d.color_terminus(x)))
            if (y != iota(x) && weight_W(d, iota, x, y) == 1) next[x].push_back(y);
    return next;
}

// Same property by dynamic programming over reduced steps with W = 1.
inline bool star_k_pclosed_dp(const LocalActionDiagram& d, const Inversion& iota, long k) {
    if (k < 1) throw ValidationError("star_k_pclosed: k must be at least 1");
    return !detail::has_walk_of_length(unit_weight_steps(d, iota), k);
}

// Smallest k in 1..|X|²+2 with (∗_k), or 0.
inline long smallest_star_k_pclosed(const LocalActionDiagram& d, const Inversion& iota) {
    return detail::smallest_k_without_walk(unit_weight_steps(d, iota));
}

inline void require_setting_pclosed(const LocalActionDiagram& d, const Inversion& iota, const char* what) {
    require_pclosed_basics(d, iota, what);
    if (smallest_star_k_pclosed(d, iota) == 0)
        throw SettingError(std::string(what) + ": no k <= |X|^2+2 with property (*_k)");
}

inline bool setting_pclosed_ok(const LocalActionDiagram& d, const Inversion& iota) {
    try {
        require_setting_pclosed(d, iota, "setting");
        return true;
    } catch (const SettingError&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Transfer operator and zeta function.

// The source of the zeta function: the root vertex over c₀, or an edge at
// the root labelled by a colour of X_{c₀}.
struct LadSource {
    bool is_root = true;
    std::size_t color = kNoColor;
    static LadSource root() { return {true, kNoColor}; }
    static LadSource at_color(std::size_t x) { return {false, x}; }
};

template <class T>
Matrix<T> bass_F(const LocalActionDiagram& d, const Inversion& iota, const Exponent<T>& s) {
    const std::size_t n = d.num_colors();
    Matrix<T> F(n, n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y : d.vertex_colors(d.color_terminus(x)))
            if (y != iota(x)) F(x, y) = ScalarTraits<T>::weight_power(weight_W(d, iota, x, y), s);
    return F;
}

template <class T>
RowVector<T> color_indicator(const LocalActionDiagram& d, const std::vector<std::size_t>& xs) {
    RowVector<T> v(d.num_colors(), ScalarTraits<T>::zero());
    for (std::size_t x : xs) v[x] = ScalarTraits<T>::one();
    return v;
}

// Colours of X_U: for a vertex target, the colours of edges ending there;
// for an edge target, X_u ⊔ X_ū.
inline std::vector<std::size_t> target_colors(const LocalActionDiagram& d, const Site& u) {
    const WeightedGraph& g = d.graph();
    std::vector<std::size_t> out;
    if (u.is_vertex()) {
        for (std::size_t a : g.in_edges(u.index))
            for (std::size_t x : d.edge_colors(a)) out.push_back(x);
    } else {
        for (std::size_t a : {u.index, g.inverse(u.index)})
            for (std::size_t x : d.edge_colors(a)) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline void check_source(const LocalActionDiagram& d, std::size_t c0, const LadSource& r) {
    if (c0 >= d.graph().num_vertices()) throw ValidationError("root vertex out of range");
    if (!r.is_root && (r.color >= d.num_colors() || d.color_origin(r.color) != c0))
        throw ValidationError("source colour must lie in X of the root vertex");
}

// Unit term: 1_{c₀}(u) for the root, 1_{o(a),t(a)}(u) or 1_{a,ā}(u) for a
// colour of X_a.
inline long lad_unit_term(const LocalActionDiagram& d, std::size_t c0, const LadSource& r, const Site& u) {
    if (r.is_root) return u.is_vertex() && u.index == c0 ? 1 : 0;
    return unit_term(d.graph(), Site::edge(d.color_edge(r.color)), u);
}

// Row vector y with Y = f_{X_U}ᵀ·y, at argument s' (already shifted).
template <class T>
RowVector<T> lad_source_row(const LocalActionDiagram& d, std::size_t c0, const LadSource& r, const Exponent<T>& s1,
                            const Matrix<T>& F) {
    const WeightedGraph& g = d.graph();
    RowVector<T> y(d.num_colors(), ScalarTraits<T>::zero());
    if (r.is_root) {
        for (std::size_t a : g.out_edges(c0))
            for (std::size_t x : d.edge_colors(a)) y[x] = ScalarTraits<T>::weight_power(g.weight(a), s1);
        return y;
    }
    y = F.left_multiply(color_indicator<T>(d, {r.color}));
    for (std::size_t z : d.vertex_colors(c0))
        if (z != r.color) y[z] += ScalarTraits<T>::weight_power(weight_W_rev(d, r.color, z), s1);
    return y;
}

template <class T>
Matrix<T> perturbation_Y(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0, const LadSource& r,
                         const Site& u, const Exponent<T>& s) {
    check_source(d, c0, r);
    Matrix<T> F = bass_F<T>(d, iota, s);
    return Matrix<T>::outer(color_indicator<T>(d, target_colors(d, u)), lad_source_row<T>(d, c0, r, s, F));
}

inline long kappa_term(const LocalActionDiagram& d, std::size_t c0, const LadSource& r, const Site& u) {
    check_source(d, c0, r);
    return lad_unit_term(d, c0, r, u) - 1;
}

// det(I − F(s+1) + Y(s+1)) / det(I − F(s+1)) + κ, with pole flags.
template <class T>
ZetaValue<T> zeta_pclosed_value(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0,
                                const LadSource& r, const Site& u, const Exponent<T>& s) {
    check_source(d, c0, r);
    require_setting_pclosed(d, iota, "zeta_pclosed");
    const Exponent<T> s1 = ScalarTraits<T>::shift(s, 1);
    ZetaValue<T> z;
    Matrix<T> F = bass_F<T>(d, iota, s1);
    Matrix<T> A = Matrix<T>::identity(d.num_colors()) - F;
    Matrix<T> B = A + Matrix<T>::outer(color_indicator<T>(d, target_colors(d, u)), lad_source_row<T>(d, c0, r, s1, F));
    z.denominator_det = det(A);
    z.numerator_det = det(B);
    bool den_zero = is_pole_candidate(z.denominator_det, A);
    bool num_zero = is_pole_candidate(z.numerator_det, B);
    if (den_zero && num_zero) {
        if constexpr (std::is_same_v<T, Rational>) {
            using D = DirichletPoly;
            Matrix<D> Fs = bass_F<D>(d, iota, SymbolicExponent{});
            Matrix<D> As = Matrix<D>::identity(d.num_colors()) - Fs;
            Matrix<D> Bs = As + Matrix<D>::outer(color_indicator<D>(d, target_colors(d, u)),
                                                 lad_source_row<D>(d, c0, r, SymbolicExponent{}, Fs));
            if (detail::resolve_by_limit(z, Bs, As, s1, ScalarTraits<T>::from_int(kappa_term(d, c0, r, u)),
                                         "diagram zeta"))
                return z;
        }
        throw IndeterminateError("indeterminate 0/0 in diagram zeta");
    }
    if (den_zero) {
        z.is_pole_candidate = true;
        z.is_zero_denominator_exact = ScalarTraits<T>::exact;
        return z;
    }
    z.ratio_is_zero = num_zero;
    z.value = z.numerator_det / z.denominator_det + ScalarTraits<T>::from_int(kappa_term(d, c0, r, u));
    return z;
}

template <class T>
T zeta_pclosed(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0, const LadSource& r, const Site& u,
               const Exponent<T>& s) {
    ZetaValue<T> z = zeta_pclosed_value<T>(d, iota, c0, r, u, s);
    if (z.is_pole_candidate) throw PoleError("pole of the diagram zeta function");
    return z.value;
}

// One evaluation request for the batched exact evaluator.
struct PclosedQuery {
    std::size_t root = 0;
    LadSource source;
    Site target;
};

// Exact values at an integer s for many (c₀, r, u) on one diagram. The
// denominator det(I − F) is shared, so a regular point costs one inverse
// and the numerators come from the matrix determinant lemma. Every query
// that is 0/0 is resolved in one batched limit along common lines.
inline std::vector<ZetaValue<Rational>> zeta_pclosed_values(const LocalActionDiagram& d, const Inversion& iota,
                                                            const std::vector<PclosedQuery>& queries, long s) {
    require_setting_pclosed(d, iota, "zeta_pclosed");
    for (const PclosedQuery& q : queries) check_source(d, q.root, q.source);
    const std::size_t n = d.num_colors();
    const long s1 = s + 1;
    std::vector<ZetaValue<Rational>> out(queries.size());
    Matrix<Rational> F = bass_F<Rational>(d, iota, s1);
    Matrix<Rational> A = Matrix<Rational>::identity(n) - F;
    const Rational detA = det(A);
    std::vector<std::size_t> open;
    if (sgn(detA) != 0) {
        Matrix<Rational> Ainv = inverse(A);
        for (std::size_t k = 0; k < queries.size(); ++k) {
            const PclosedQuery& q = queries[k];
            RowVector<Rational> y = lad_source_row<Rational>(d, q.root, q.source, s1, F);
            RowVector<Rational> f = color_indicator<Rational>(d, target_colors(d, q.target));
            Rational ratio = Rational(1) + dot(Ainv.left_multiply(y), f);
            ZetaValue<Rational>& z = out[k];
            z.denominator_det = detA;
            z.numerator_det = ratio * detA;
            z.ratio_is_zero = sgn(ratio) == 0;
            z.value = ratio + Rational(kappa_term(d, q.root, q.source, q.target));
        }
        return out;
    }
    for (std::size_t k = 0; k < queries.size(); ++k) {
        const PclosedQuery& q = queries[k];
        Matrix<Rational> B = A + Matrix<Rational>::outer(color_indicator<Rational>(d, target_colors(d, q.target)),
                                                         lad_source_row<Rational>(d, q.root, q.source, s1, F));
        out[k].denominator_det = detA;
        out[k].numerator_det = det(B);
        if (sgn(out[k].numerator_det) != 0) {
            out[k].is_pole_candidate = true;
            out[k].is_zero_denominator_exact = true;
        } else {
            open.push_back(k);
        }
    }
    if (open.empty()) return out;

    using D = DirichletPoly;
    Matrix<D> Fs = bass_F<D>(d, iota, SymbolicExponent{});
    Matrix<D> As = Matrix<D>::identity(n) - Fs;
    std::vector<Matrix<D>> ys;
    std::vector<RowVector<Rational>> fs;
    std::set<std::uint64_t> primes;
    detail::collect_primes(As, primes);
    std::size_t degree = detail::det_degree_bound(As);
    for (std::size_t k : open) {
        const PclosedQuery& q = queries[k];
        RowVector<D> y = lad_source_row<D>(d, q.root, q.source, SymbolicExponent{}, Fs);
        RowVector<D> f = color_indicator<D>(d, target_colors(d, q.target));
        Matrix<D> yr(1, n);
        for (std::size_t j = 0; j < n; ++j) yr(0, j) = y[j];
        detail::collect_primes(yr, primes);
        degree = std::max(degree, detail::det_degree_bound(As + Matrix<D>::outer(f, y)));
        ys.push_back(std::move(yr));
        fs.push_back(color_indicator<Rational>(d, target_colors(d, q.target)));
    }
    BatchLimitProblem prob;
    prob.primes.assign(primes.begin(), primes.end());
    prob.sigma0 = s1;
    prob.count = open.size();
    prob.degree = degree;
    prob.evaluate = [&](const detail::Direction& dir, const Rational& eps) {
        Matrix<Rational> Ae = detail::evaluate_matrix(As, s1, dir, eps);
        Rational de = det(Ae);
        std::vector<Rational> v{de};
        std::optional<Matrix<Rational>> inv;
        if (sgn(de) != 0) inv = inverse(Ae);
        for (std::size_t k = 0; k < ys.size(); ++k) {
            Matrix<Rational> ye = detail::evaluate_matrix(ys[k], s1, dir, eps);
            RowVector<Rational> y(n);
            for (std::size_t j = 0; j < n; ++j) y[j] = ye(0, j);
            if (inv) {
                v.push_back(de * (Rational(1) + dot(inv->left_multiply(y), fs[k])));
            } else {
                v.push_back(det(Ae + Matrix<Rational>::outer(fs[k], y)));
            }
        }
        return v;
    };
    std::vector<RatioLimit> lims = ratio_limits(prob);
    for (std::size_t i = 0; i < open.size(); ++i) {
        const PclosedQuery& q = queries[open[i]];
        ZetaValue<Rational>& z = out[open[i]];
        z.by_limit = true;
        switch (lims[i].kind) {
            case RatioLimit::Kind::Value:
                z.value = lims[i].value + Rational(kappa_term(d, q.root, q.source, q.target));
                break;
            case RatioLimit::Kind::Pole:
                z.is_pole_candidate = true;
                z.is_zero_denominator_exact = true;
                break;
            case RatioLimit::Kind::Irrational:
                throw IndeterminateError("0/0 in diagram zeta: the limit is not rational");
            case RatioLimit::Kind::TooCostly:
                throw IndeterminateError("0/0 in diagram zeta: certifying the limit exceeds the direction budget");
            case RatioLimit::Kind::Degenerate:
                throw IndeterminateError("indeterminate 0/0 in diagram zeta");
        }
    }
    return out;
}

// Integer weight distribution of the truncated series over reduced colour
// paths: combined weight → number of terms. Root: ω(a)·W(ξ) for ξ of length
// 1..L starting in X_a. Colour x: W(ξ) for ξ from x of length 2..L, and
// W_rev(x,y)·W(ξ) for y ≠ x in X_{c₀} and ξ from y of length 1..L−1.
inline std::map<std::uint64_t, Integer> lad_weight_distribution(const LocalActionDiagram& d, const Inversion& iota,
                                                                std::size_t c0, const LadSource& r, const Site& u,
                                                                long L) {
    check_source(d, c0, r);
    const std::size_t n = d.num_colors();
    std::vector<bool> in_target(n, false);
    for (std::size_t x : target_colors(d, u)) in_target[x] = true;
    std::map<std::uint64_t, Integer> out;
    if (long unit = lad_unit_term(d, c0, r, u)) out[1] += unit;

    using Layer = std::vector<std::map<std::uint64_t, Integer>>;
    // Runs layers from a seeded length-1 layer, recording lengths in
    // [min_len, max_len].
    auto run = [&](Layer layer, long min_len, long max_len) {
        for (long len = 1; len <= max_len; ++len) {
            if (len >= min_len)
                for (std::size_t x = 0; x < n; ++x)
                    if (in_target[x])
                        for (const auto& [w, c] : layer[x]) out[w] += c;
            if (len == max_len) break;
            Layer next(n);
            for (std::size_t x = 0; x < n; ++x) {
                if (layer[x].empty()) continue;
                for (std::size_t y : d.vertex_colors(d.color_terminus(x))) {
                    if (y == iota(x)) continue;
                    std::uint64_t f = weight_W(d, iota, x, y);
                    for (const auto& [w, c] : layer[x]) {
                        std::uint64_t nw;
                        if (__builtin_mul_overflow(w, f, &nw)) throw CapacityError("colour path weight overflow");
                        next[y][nw] += c;
                    }
                }
            }
            layer = std::move(next);
        }
    };
    const WeightedGraph& g = d.graph();
    if (r.is_root) {
        Layer start(n);
        for (std::size_t a : g.out_edges(c0))
            for (std::size_t x : d.edge_colors(a)) start[x][g.weight(a)] += 1;
        run(std::move(start), 1, L);
    } else {
        Layer start(n);
        start[r.color][1] += 1;
        run(std::move(start), 2, L);
        Layer rev(n);
        for (std::size_t z : d.vertex_colors(c0))
            if (z != r.color) rev[z][weight_W_rev(d, r.color, z)] += 1;
        run(std::move(rev), 1, L - 1);
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

template <class T>
T zeta_pclosed_series_paths(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0, const LadSource& r,
                            const Site& u, const Exponent<T>& s, long L) {
    const Exponent<T> s1 = ScalarTraits<T>::shift(s, 1);
    T v = ScalarTraits<T>::zero();
    for (const auto& [w, c] : lad_weight_distribution(d, iota, c0, r, u, L)) {
        // The unit term has weight 1 and is not rescaled.
        v += ScalarTraits<T>::from_integer(c) * ScalarTraits<T>::weight_power(w, s1);
    }
    return v;
}

template <class T>
T zeta_pclosed_series_matrix(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0, const LadSource& r,
                             const Site& u, const Exponent<T>& s, long L) {
    if (L < 0) throw ValidationError("negative series horizon");
    check_source(d, c0, r);
    const Exponent<T> s1 = ScalarTraits<T>::shift(s, 1);
    T v = ScalarTraits<T>::from_int(lad_unit_term(d, c0, r, u));
    Matrix<T> F = bass_F<T>(d, iota, s1);
    RowVector<T> f = color_indicator<T>(d, target_colors(d, u));
    long powers = r.is_root ? L - 1 : L - 2;
    if (powers < 0) return v;
    RowVector<T> y = lad_source_row<T>(d, c0, r, s1, F);
    return v + dot(neumann_partial(F, powers).left_multiply(y), f);
}

// Truncated series at horizon L, from both sides; they must agree.
template <class T>
T zeta_pclosed_series(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0, const LadSource& r,
                      const Site& u, const Exponent<T>& s, long L) {
    T a = zeta_pclosed_series_paths<T>(d, iota, c0, r, u, s, L);
    T b = zeta_pclosed_series_matrix<T>(d, iota, c0, r, u, s, L);
    if (!series_agree(a, b))
        throw InternalCheckError("zeta_pclosed_series: path sum " + format_scalar(a) + " != matrix sum " +
                                 format_scalar(b));
    return a;
}

// ---------------------------------------------------------------------------
// Companion diagram: each G(c) replaced by the group of all permutations of
// X_c preserving every block X_a.

inline std::vector<Permutation> block_symmetric_generators(std::size_t degree,
                                                           const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<Permutation> gens;
    for (const auto& b : blocks) {
        if (b.size() < 2) continue;
        Permutation t = identity_permutation(degree);
        std::swap(t[b[0]], t[b[1]]);
        gens.push_back(t);
        if (b.size() > 2) {
            Permutation c = identity_permutation(degree);
            for (std::size_t i = 0; i < b.size(); ++i) c[b[i]] = static_cast<std::uint32_t>(b[(i + 1) % b.size()]);
            gens.push_back(c);
        }
    }
    return gens;
}

inline LocalActionDiagram wlit_companion(const LocalActionDiagram& d, std::size_t cap = kDefaultGroupCap) {
    const WeightedGraph& g = d.graph();
    std::vector<PermGroup> groups;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        std::vector<std::vector<std::size_t>> blocks;
        for (std::size_t a : g.out_edges(v)) {
            std::vector<std::size_t> b;
            for (std::size_t x : d.edge_colors(a)) b.push_back(d.local_index(x));
            blocks.push_back(b);
        }
        groups.emplace_back(d.vertex_colors(v).size(), block_symmetric_generators(d.vertex_colors(v).size(), blocks),
                            cap);
    }
    return LocalActionDiagram::with_groups(d, std::move(groups));
}

// Full-symmetric diagram on a weighted graph: X_a = {a#0, …, a#(ω(a)−1)}.
inline LocalActionDiagram full_symmetric_diagram(const WeightedGraph& g, std::size_t cap = kDefaultGroupCap) {
    std::vector<RawLadEdge> es;
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        RawLadEdge e{g.edge_id(a), g.vertex_id(g.origin(a)), g.vertex_id(g.terminus(a)), g.edge_id(g.inverse(a)), {}};
        for (std::uint64_t i = 0; i < g.weight(a); ++i) e.colors.push_back(g.edge_id(a) + "#" + std::to_string(i));
        es.push_back(std::move(e));
    }
    LocalActionDiagram::RawGenerators gens;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        auto& list = gens[g.vertex_id(v)];
        for (std::size_t a : g.out_edges(v)) {
            std::uint64_t w = g.weight(a);
            if (w < 2) continue;
            auto name = [&](std::uint64_t i) { return g.edge_id(a) + "#" + std::to_string(i); };
            list.push_back({{name(0), name(1)}, {name(1), name(0)}});
            if (w > 2) {
                std::map<std::string, std::string> cyc;
                for (std::uint64_t i = 0; i < w; ++i) cyc[name(i)] = name((i + 1) % w);
                list.push_back(cyc);
            }
        }
    }
    return LocalActionDiagram::build(g.vertex_ids(), std::move(es), gens, cap);
}

// ---------------------------------------------------------------------------
// Truncated tree built from reduced colour paths, and its oracle checks.

struct TruncatedDeltaTree {
    struct Node {
        std::size_t parent = kNoColor;
        std::size_t color = kNoColor;  // label of the edge from the parent
        std::size_t depth = 0;
        std::size_t base_vertex = 0;   // image in the base graph
        std::vector<std::size_t> children;
    };
    std::size_t root_vertex = 0;
    long depth = 0;
    std::vector<Node> nodes;  // nodes[0] is the root
};

// Number of reduced colour paths of each length 0..L from X_{c₀}, computed
// from powers of the 0/1 reduced-composability matrix.
inline std::vector<Integer> reduced_path_counts(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0,
                                                long L) {
    Matrix<Rational> F0 = bass_F<Rational>(d, iota, 0);
    RowVector<Rational> v = color_indicator<Rational>(d, d.vertex_colors(c0));
    RowVector<Rational> ones(d.num_colors(), Rational(1));
    std::vector<Integer> out{Integer(1)};
    for (long len = 1; len <= L; ++len) {
        out.push_back(dot(v, ones).get_num());
        v = F0.left_multiply(v);
    }
    return out;
}

inline constexpr std::size_t kTreeVertexCap = 1000000;

inline TruncatedDeltaTree build_truncated_tree(const LocalActionDiagram& d, const Inversion& iota, std::size_t c0,
                                               long L, std::size_t cap = kTreeVertexCap) {
    if (L < 1) throw ValidationError("tree depth must be at least 1");
    if (c0 >= d.graph().num_vertices()) throw ValidationError("root vertex out of range");
    Integer total(0);
    for (const auto& c : reduced_path_counts(d, iota, c0, L)) total += c;
    if (total > Integer(static_cast<unsigned long>(cap)))
        throw CapacityError("truncated tree would have " + total.get_str() + " vertices");
    TruncatedDeltaTree t;
    t.root_vertex = c0;
    t.depth = L;
    t.nodes.push_back({kNoColor, kNoColor, 0, c0, {}});
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        if (static_cast<long>(t.nodes[i].depth) == L) continue;
        const std::size_t base = t.nodes[i].base_vertex;
        const std::size_t last = t.nodes[i].color;
        for (std::size_t y : d.vertex_colors(base)) {
            if (last != kNoColor && y == iota(last)) continue;
            TruncatedDeltaTree::Node child{i, y, t.nodes[i].depth + 1, d.color_terminus(y), {}};
            t.nodes[i].children.push_back(t.nodes.size());
            t.nodes.push_back(child);
        }
    }
    return t;
}

struct TreeOracleReport {
    bool bijection_ok = true;
    bool edge_counts_ok = true;
    bool vertex_counts_ok = true;
    std::size_t checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return bijection_ok && edge_counts_ok && vertex_counts_ok; }
};

namespace detail {

// Base-graph images (edge sequences) of the downward geodesics from node
// `from`, including the edge into `from` when it is not the root, grouped
// and counted.
inline std::map<std::vector<std::size_t>, std::size_t> geodesic_images(const LocalActionDiagram& d,
                                                                       const TruncatedDeltaTree& t, std::size_t from) {
    std::map<std::vector<std::size_t>, std::size_t> out;
    std::vector<std::size_t> prefix;
    if (t.nodes[from].color != kNoColor) prefix.push_back(d.color_edge(t.nodes[from].color));
    std::function<void(std::size_t)> walk = [&](std::size_t node) {
        out[prefix] += 1;
        for (std::size_t ch : t.nodes[node].children) {
            prefix.push_back(d.color_edge(t.nodes[ch].color));
            walk(ch);
            prefix.pop_back();
        }
    };
    walk(from);
    return out;
}

}  // namespace detail

// (a) labels along root geodesics are distinct reduced colour paths, as many
// per length as counted independently; (b) from each edge e, the number of
// downward geodesics with base image p is N_edg(p); (c) from the root, the
// number with image p is N_vert(p).
inline TreeOracleReport oracle_check_tree(const LocalActionDiagram& d, const Inversion& iota,
                                          const TruncatedDeltaTree& t) {
    TreeOracleReport rep;
    const WeightedGraph& g = d.graph();
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (rep.failures.size() < 20) rep.failures.push_back(msg);
    };

    // (a)
    std::set<std::vector<std::size_t>> labels;
    std::vector<Integer> per_len(static_cast<std::size_t>(t.depth) + 1, Integer(0));
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        std::vector<std::size_t> lab;
        for (std::size_t v = i; t.nodes[v].color != kNoColor; v = t.nodes[v].parent) lab.push_back(t.nodes[v].color);
        std::reverse(lab.begin(), lab.end());
        DeltaPath p{t.root_vertex, lab};
        ++rep.checks;
        if (!is_reduced_delta_path(d, iota, p)) fail(rep.bijection_ok, "label of node " + std::to_string(i) + " is not reduced");
        if (!labels.insert(lab).second) fail(rep.bijection_ok, "label repeated at node " + std::to_string(i));
        per_len[lab.size()] += 1;
    }
    auto expected = reduced_path_counts(d, iota, t.root_vertex, t.depth);
    for (std::size_t len = 0; len < per_len.size(); ++len) {
        ++rep.checks;
        if (per_len[len] != expected[len])
            fail(rep.bijection_ok, "length " + std::to_string(len) + ": " + per_len[len].get_str() +
                                       " labels vs " + expected[len].get_str() + " reduced colour paths");
    }

    // (b)
    for (std::size_t i = 1; i < t.nodes.size(); ++i) {
        auto images = detail::geodesic_images(d, t, i);
        std::size_t a = d.color_edge(t.nodes[i].color);
        long max_len = t.depth - static_cast<long>(t.nodes[i].depth) + 1;
        for_each_path(g, Site::edge(a), max_len, [&](const Path& p) {
            ++rep.checks;
            auto it = images.find(p.edges);
            std::size_t got = it == images.end() ? 0 : it->second;
            Integer want = n_edg(g, p);
            if (Integer(static_cast<unsigned long>(got)) != want)
                fail(rep.edge_counts_ok, "node " + std::to_string(i) + " path " + format_path(g, p) + ": " +
                                             std::to_string(got) + " lifts vs N_edg " + want.get_str());
        });
    }

    // (c)
    auto images = detail::geodesic_images(d, t, 0);
    for_each_path(g, Site::vertex(t.root_vertex), t.depth, [&](const Path& p) {
        ++rep.checks;
        auto it = images.find(p.edges);
        std::size_t got = it == images.end() ? 0 : it->second;
        Integer want = n_vert(g, p);
        if (Integer(static_cast<unsigned long>(got)) != want)
            fail(rep.vertex_counts_ok, "root path " + format_path(g, p) + ": " + std::to_string(got) +
                                           " lifts vs N_vert " + want.get_str());
    });
    return rep;
}

}  // namespace treezeta
