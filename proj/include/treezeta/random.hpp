#pragma once

// Seeded random instances for the verification suites and the property
// tests: weighted graphs, decompositions for the splitting identities, and
// local action diagrams with small local groups.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treezeta/euler.hpp"
#include "treezeta/graph.hpp"
#include "treezeta/lad.hpp"
#include "treezeta/weights.hpp"
#include "treezeta/zeta.hpp"

namespace treezeta::gen {

using Rng = std::mt19937_64;

// Independent stream per (seed, instance) pair.
inline Rng instance_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class V>
const typename V::value_type& pick(Rng& rng, const V& v) {
    return v[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(v.size()) - 1))];
}

struct WeightRange {
    long lo = 2;
    long hi = 5;
};

// Incrementally assembled graph. Vertex ids are "v00", "v01", …; each edge
// pair is "eNNN" with inverse "eNNNr".
class GraphDraft {
public:
    std::string add_vertex() {
        std::string id = vertex_name(vertices_.size());
        vertices_.push_back(id);
        return id;
    }

    // Adds a: o → t with ω(a) = w and its inverse with ω(ā) = wbar.
    std::pair<std::string, std::string> add_pair(const std::string& o, const std::string& t, long w, long wbar) {
        std::string a = edge_name(pairs_);
        std::string abar = a + "r";
        ++pairs_;
        edges_.push_back(RawEdge{a, o, t, abar, w});
        edges_.push_back(RawEdge{abar, t, o, a, wbar});
        return {a, abar};
    }

    std::size_t num_pairs() const { return pairs_; }
    const std::vector<std::string>& vertices() const { return vertices_; }
    WeightedGraph build() const { return WeightedGraph::build(vertices_, edges_); }

    static std::string vertex_name(std::size_t k) { return (k < 10 ? "v0" : "v") + std::to_string(k); }
    static std::string edge_name(std::size_t k) {
        std::string n = std::to_string(k);
        return "e" + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n;
    }

private:
    std::vector<std::string> vertices_;
    std::vector<RawEdge> edges_;
    std::size_t pairs_ = 0;
};

// The edge ids and vertex ids added by one call of a piece generator.
struct Piece {
    std::set<std::string> vertices;
    std::set<std::string> edges;

    void add_pair(const std::pair<std::string, std::string>& p) {
        edges.insert(p.first);
        edges.insert(p.second);
    }
    SubgraphSpec spec() const { return {vertices, edges}; }
};

enum class Shape {
    General,      // arbitrary connected multigraph with loops
    TreeLoops,    // tree decorated with balanced loops
    Tree,         // tree without loops
};

inline long weight(Rng& rng, const WeightRange& w) { return uniform_int(rng, w.lo, w.hi); }

// Grows a connected piece attached at `anchor` with `pairs` edge pairs and
// up to `pairs` new vertices, according to the shape.
inline Piece grow_piece(Rng& rng, GraphDraft& d, const std::string& anchor, std::size_t pairs, Shape shape,
                        const WeightRange& w) {
    Piece piece;
    piece.vertices.insert(anchor);
    std::vector<std::string> verts{anchor};
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::string& from = pick(rng, verts);
        bool new_vertex = shape == Shape::Tree || coin(rng, 0.55);
        if (new_vertex) {
            std::string v = d.add_vertex();
            piece.add_pair(d.add_pair(from, v, weight(rng, w), weight(rng, w)));
            piece.vertices.insert(v);
            verts.push_back(v);
        } else if (shape == Shape::TreeLoops) {
            long x = weight(rng, w);
            piece.add_pair(d.add_pair(from, from, x, x));
        } else {
            const std::string& to = pick(rng, verts);
            piece.add_pair(d.add_pair(from, to, weight(rng, w), weight(rng, w)));
        }
    }
    return piece;
}

// A connected graph with between 1 and max_pairs edge pairs passing
// Setting [Γ].
inline WeightedGraph random_graph(Rng& rng, std::size_t max_pairs, Shape shape, const WeightRange& w = {}) {
    for (;;) {
        GraphDraft d;
        std::string root = d.add_vertex();
        grow_piece(rng, d, root, static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(max_pairs))), shape, w);
        WeightedGraph g = d.build();
        if (setting_gamma_ok(g)) return g;
    }
}

// A unimodular graph, possibly with long cycles: ω(a) = m(a)·φ(t(a)) and
// ω(ā) = m(a)·φ(o(a)) for a vertex potential φ, so that every closed path
// has balanced weight products.
inline WeightedGraph random_unimodular_graph(Rng& rng, std::size_t max_pairs) {
    for (;;) {
        GraphDraft d;
        std::vector<std::string> verts{d.add_vertex()};
        std::vector<long> phi{uniform_int(rng, 1, 3)};
        const long pairs = uniform_int(rng, 1, static_cast<long>(max_pairs));
        for (long k = 0; k < pairs; ++k) {
            std::size_t from = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(verts.size()) - 1));
            std::size_t to;
            if (coin(rng, 0.5)) {
                verts.push_back(d.add_vertex());
                phi.push_back(uniform_int(rng, 1, 3));
                to = verts.size() - 1;
            } else {
                to = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(verts.size()) - 1));
            }
            long m = uniform_int(rng, 1, 2);
            d.add_pair(verts[from], verts[to], m * phi[to], m * phi[from]);
        }
        WeightedGraph g = d.build();
        if (setting_gamma_ok(g)) return g;
    }
}

// ---------------------------------------------------------------------------
// Decompositions for the splitting identities.

struct Decomposition {
    SplitKind kind = SplitKind::Vertex;
    WeightedGraph graph;
    std::vector<SubgraphSpec> parts;
    std::string site;
};

// Restricts a piece to a random connected sub-piece containing `anchor`
// (a random subset of its edge pairs, then the component at the anchor is
// taken by the evaluator).
inline Piece random_subpiece(Rng& rng, const WeightedGraph& g, const Piece& p, const std::string& anchor) {
    Piece r;
    r.vertices.insert(anchor);
    for (const auto& e : p.edges) {
        std::size_t idx = g.edge(e);
        if (idx > g.inverse(idx)) continue;
        if (!coin(rng)) continue;
        r.edges.insert(e);
        r.edges.insert(g.edge_id(g.inverse(idx)));
        r.vertices.insert(g.vertex_id(g.origin(idx)));
        r.vertices.insert(g.vertex_id(g.terminus(idx)));
    }
    return r;
}

inline Piece merge(const Piece& a, const Piece& b) {
    Piece r = a;
    r.vertices.insert(b.vertices.begin(), b.vertices.end());
    r.edges.insert(b.edges.begin(), b.edges.end());
    return r;
}

// Two pieces meeting exactly in a vertex c (site c), or in a segment {a, ā}
// (site a). With four_parts, outer parts Γi ⊇ Λi are added, each Γi taking
// a random sub-piece of the other side.
inline Decomposition random_split(Rng& rng, SplitKind kind, bool four_parts, Shape shape, std::size_t piece_pairs,
                                  const WeightRange& w = {}) {
    for (;;) {
        GraphDraft d;
        std::string c = d.add_vertex();
        Decomposition dec;
        dec.kind = kind;
        Piece core;
        core.vertices.insert(c);
        std::string other = c;
        if (kind == SplitKind::Edge) {
            other = d.add_vertex();
            auto seg = d.add_pair(c, other, weight(rng, w), weight(rng, w));
            core.add_pair(seg);
            core.vertices.insert(other);
            dec.site = seg.first;
        } else {
            dec.site = c;
        }
        // For an edge split the first side hangs off c and the second off
        // the other endpoint, so the sides share no vertex outside the segment.
        auto side = [&](const std::string& anchor) {
            std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(piece_pairs)));
            return merge(core, grow_piece(rng, d, anchor, n, shape, w));
        };
        Piece l1 = side(c);
        Piece l2 = side(other);
        dec.graph = d.build();
        if (!setting_gamma_ok(dec.graph)) continue;
        if (!four_parts) {
            dec.parts = {l1.spec(), l2.spec()};
        } else {
            Piece m1 = merge(core, random_subpiece(rng, dec.graph, l1, c));
            Piece m2 = merge(core, random_subpiece(rng, dec.graph, l2, other));
            dec.parts = {l1.spec(), l2.spec(), merge(l1, m2).spec(), merge(l2, m1).spec()};
        }
        return dec;
    }
}

// A segment a: c → d with c a new terminal vertex, attached to a random
// piece at d (site a).
inline Decomposition random_terminal_segment(Rng& rng, Shape shape, std::size_t piece_pairs,
                                             const WeightRange& w = {}) {
    for (;;) {
        GraphDraft d;
        std::string anchor = d.add_vertex();
        grow_piece(rng, d, anchor, static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(piece_pairs))),
                   shape, w);
        std::string c = d.add_vertex();
        auto seg = d.add_pair(c, anchor, weight(rng, w), weight(rng, w));
        Decomposition dec{SplitKind::TerminalSegment, d.build(), {}, seg.first};
        if (setting_gamma_ok(dec.graph)) return dec;
    }
}

// A loop at the base vertex of a random piece (site the loop). With
// balanced, ω(a) = ω(ā).
inline Decomposition random_loop_reduction(Rng& rng, Shape shape, bool balanced, std::size_t piece_pairs,
                                           const WeightRange& w = {}) {
    for (;;) {
        GraphDraft d;
        std::string c = d.add_vertex();
        grow_piece(rng, d, c, static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(piece_pairs))), shape, w);
        long x = weight(rng, w);
        auto loop = d.add_pair(c, c, x, balanced ? x : weight(rng, w));
        Decomposition dec{SplitKind::Loop, d.build(), {}, loop.first};
        if (setting_gamma_ok(dec.graph)) return dec;
    }
}

// A tree Γ = Γ1 ∪ Γ2 glued along a: p → q, with q terminal in Γ1 and p
// terminal in Γ2.
struct BridgeDecomposition {
    WeightedGraph graph;
    SubgraphSpec first;
    SubgraphSpec second;
    std::string edge;
};

inline BridgeDecomposition random_bridge_tree(Rng& rng, std::size_t side_pairs, const WeightRange& w = {}) {
    for (;;) {
        GraphDraft d;
        std::string p = d.add_vertex();
        std::string q = d.add_vertex();
        auto a = d.add_pair(p, q, weight(rng, w), weight(rng, w));
        Piece h1 = grow_piece(rng, d, p, static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(side_pairs))),
                              Shape::Tree, w);
        Piece h2 = grow_piece(rng, d, q, static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(side_pairs))),
                              Shape::Tree, w);
        h1.add_pair(a);
        h1.vertices.insert(q);
        h2.add_pair(a);
        h2.vertices.insert(p);
        BridgeDecomposition b{d.build(), h1.spec(), h2.spec(), a.first};
        if (setting_gamma_ok(b.graph)) return b;
    }
}

// ---------------------------------------------------------------------------
// Local action diagrams.

// The inversion used for generated diagrams: the default pairing when the
// colour sets of every pair have equal size, the wrapping one otherwise.
inline Inversion generated_inversion(const LocalActionDiagram& d) {
    const WeightedGraph& g = d.graph();
    for (std::size_t a = 0; a < g.num_edges(); ++a)
        if (g.weight(a) != g.weight(g.inverse(a))) return wrapping_inversion(d);
    return default_inversion(d);
}

struct DiagramInstance {
    LocalActionDiagram diagram;
    Inversion inversion;
};

// Full-symmetric diagram on a small random graph.
inline DiagramInstance random_full_symmetric(Rng& rng, std::size_t max_pairs, Shape shape = Shape::General,
                                             const WeightRange& w = {2, 3}) {
    for (;;) {
        WeightedGraph g = random_graph(rng, max_pairs, shape, w);
        LocalActionDiagram d = full_symmetric_diagram(g);
        Inversion iota = generated_inversion(d);
        if (setting_pclosed_ok(d, iota)) return {std::move(d), std::move(iota)};
    }
}

enum class BlockAction { Cyclic, Dihedral, Alternating, Symmetric };

// Generators of the given action on one block of a domain of size degree.
inline std::vector<Permutation> block_generators(std::size_t degree, const std::vector<std::size_t>& b,
                                                 BlockAction action) {
    std::vector<Permutation> gens;
    const std::size_t n = b.size();
    if (n < 2) return gens;
    auto cycle = [&](const std::vector<std::size_t>& pts) {
        Permutation p = identity_permutation(degree);
        for (std::size_t i = 0; i < pts.size(); ++i) p[pts[i]] = static_cast<std::uint32_t>(pts[(i + 1) % pts.size()]);
        return p;
    };
    switch (action) {
        case BlockAction::Cyclic:
            gens.push_back(cycle(b));
            break;
        case BlockAction::Dihedral: {
            gens.push_back(cycle(b));
            Permutation refl = identity_permutation(degree);
            for (std::size_t i = 0; i < n; ++i) refl[b[i]] = static_cast<std::uint32_t>(b[(n - i) % n]);
            gens.push_back(refl);
            break;
        }
        case BlockAction::Alternating:
            if (n >= 3) {
                for (std::size_t i = 0; i + 2 < n; ++i) gens.push_back(cycle({b[i], b[i + 1], b[i + 2]}));
                break;
            }
            [[fallthrough]];
        case BlockAction::Symmetric:
            gens.push_back(cycle({b[0], b[1]}));
            if (n > 2) gens.push_back(cycle(b));
            break;
    }
    return gens;
}

// Order of the block-symmetric group at v: the product of |X_a|! over the
// edges a leaving v.
inline std::uint64_t companion_order(const WeightedGraph& g, std::size_t v) {
    std::uint64_t n = 1;
    for (std::size_t a : g.out_edges(v))
        for (std::uint64_t k = 2; k <= g.weight(a); ++k) n *= k;
    return n;
}

inline constexpr std::uint64_t kCompanionOrderLimit = 5000;

inline bool differs_from_companion(const LocalActionDiagram& d) {
    for (std::size_t v = 0; v < d.graph().num_vertices(); ++v)
        if (d.group(v).order() != companion_order(d.graph(), v)) return true;
    return false;
}

// Diagram whose local groups are direct products of per-block actions. In
// every edge pair one block carries a cyclic or dihedral action and the
// other a 2-transitive one (symmetric, or alternating on four points);
// without a 2-transitive side, back-and-forth steps of weight 1 continue
// forever and Setting [(P)-cl] fails. Colour sets have size 2 to 4, at
// least one group is smaller than the block-symmetric group, and the
// block-symmetric groups stay below kCompanionOrderLimit.
inline DiagramInstance random_cyclic_diagram(Rng& rng, std::size_t max_pairs, Shape shape = Shape::General) {
    for (;;) {
        GraphDraft draft;
        std::string root = draft.add_vertex();
        const std::size_t pairs = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(max_pairs)));
        grow_piece(rng, draft, root, pairs, shape, {1, 1});
        WeightedGraph skeleton = draft.build();
        std::vector<std::uint64_t> ws(skeleton.num_edges());
        std::vector<BlockAction> act(skeleton.num_edges());
        for (std::size_t a = 0; a < skeleton.num_edges(); ++a) {
            std::size_t abar = skeleton.inverse(a);
            if (abar < a) continue;
            bool a_poor = coin(rng);
            std::size_t poor = a_poor ? a : abar, rich = a_poor ? abar : a;
            ws[poor] = static_cast<std::uint64_t>(uniform_int(rng, 2, 4));
            act[poor] = ws[poor] == 3 || coin(rng) ? BlockAction::Cyclic : BlockAction::Dihedral;
            ws[rich] = static_cast<std::uint64_t>(uniform_int(rng, 3, 4));
            act[rich] = ws[rich] == 4 && coin(rng) ? BlockAction::Alternating : BlockAction::Symmetric;
        }
        WeightedGraph g = skeleton.with_weights(ws);
        bool small = true;
        for (std::size_t v = 0; v < g.num_vertices(); ++v) small = small && companion_order(g, v) <= kCompanionOrderLimit;
        if (!small) continue;
        LocalActionDiagram full = full_symmetric_diagram(g);
        std::vector<PermGroup> groups;
        for (std::size_t v = 0; v < g.num_vertices(); ++v) {
            const std::size_t deg = full.vertex_colors(v).size();
            std::vector<Permutation> gens;
            for (std::size_t a : g.out_edges(v)) {
                std::vector<std::size_t> b;
                for (std::size_t x : full.edge_colors(a)) b.push_back(full.local_index(x));
                for (auto& p : block_generators(deg, b, act[a])) gens.push_back(std::move(p));
            }
            groups.emplace_back(deg, std::move(gens));
        }
        LocalActionDiagram d = LocalActionDiagram::with_groups(full, std::move(groups));
        if (!differs_from_companion(d)) continue;
        Inversion iota = generated_inversion(d);
        if (setting_pclosed_ok(d, iota)) return {std::move(d), std::move(iota)};
    }
}

}  // namespace treezeta::gen
