#pragma once

// Finite permutation groups given by generators, materialized by brute-force
// closure. Orbits come straight from the generators; stabilizer orbits filter
// the materialized element list.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "treezeta/errors.hpp"

namespace treezeta {

// Image array: p[i] is the image of point i.
using Permutation = std::vector<std::uint32_t>;

inline Permutation identity_permutation(std::size_t n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0u);
    return p;
}

inline bool is_permutation(const Permutation& p) {
    std::vector<bool> hit(p.size(), false);
    for (auto x : p) {
        if (x >= p.size() || hit[x]) return false;
        hit[x] = true;
    }
    return true;
}

// (p ∘ q)(i) = p(q(i)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
    Permutation r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
    return r;
}

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : p) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

inline constexpr std::size_t kDefaultGroupCap = 1000000;

class PermGroup {
public:
    PermGroup() : PermGroup(0, {}) {}
    PermGroup(std::size_t degree, std::vector<Permutation> generators, std::size_t cap = kDefaultGroupCap)
        : degree_(degree), generators_(std::move(generators)), cap_(cap), state_(std::make_shared<State>()) {
        for (const auto& g : generators_)
            if (g.size() != degree_ || !is_permutation(g))
                throw ValidationError("generator is not a permutation of the domain");
    }

    std::size_t degree() const { return degree_; }
    const std::vector<Permutation>& generators() const { return generators_; }
    std::size_t cap() const { return cap_; }

    // All elements, computed once by closure under the generators. Concurrent
    // callers either trigger the single computation or see its result.
    const std::vector<Permutation>& elements() const {
        std::call_once(state_->once, [this] { state_->elements = close(); });
        return state_->elements;
    }
    std::size_t order() const { return elements().size(); }

    std::vector<std::size_t> orbit(std::size_t x) const {
        check_point(x);
        std::vector<bool> seen(degree_, false);
        std::vector<std::size_t> out{x}, stack{x};
        seen[x] = true;
        while (!stack.empty()) {
            std::size_t p = stack.back();
            stack.pop_back();
            for (const auto& g : generators_)
                if (!seen[g[p]]) {
                    seen[g[p]] = true;
                    out.push_back(g[p]);
                    stack.push_back(g[p]);
                }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // The orbit partition, each orbit sorted, orbits ordered by least point.
    std::vector<std::vector<std::size_t>> orbits() const {
        std::vector<bool> done(degree_, false);
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t x = 0; x < degree_; ++x) {
            if (done[x]) continue;
            auto o = orbit(x);
            for (auto y : o) done[y] = true;
            out.push_back(std::move(o));
        }
        return out;
    }

    std::size_t stabilizer_order(std::size_t x) const {
        check_point(x);
        std::size_t n = 0;
        for (const auto& g : elements())
            if (g[x] == x) ++n;
        return n;
    }

    // |Stab(x)·y| for every y, cached per x.
    const std::vector<std::size_t>& stab_orbit_sizes(std::size_t x) const {
        check_point(x);
        {
            std::lock_guard<std::mutex> lock(state_->cache_mutex);
            auto it = state_->stab_cache.find(x);
            if (it != state_->stab_cache.end()) return it->second;
        }
        std::vector<std::size_t> sizes(degree_, 0);
        // img[y][z]: some element fixing x sends y to z.
        std::vector<std::vector<bool>> img(degree_, std::vector<bool>(degree_, false));
        for (const auto& g : elements()) {
            if (g[x] != x) continue;
            for (std::size_t y = 0; y < degree_; ++y) img[y][g[y]] = true;
        }
        for (std::size_t y = 0; y < degree_; ++y)
            for (std::size_t z = 0; z < degree_; ++z) sizes[y] += img[y][z] ? 1 : 0;
        std::lock_guard<std::mutex> lock(state_->cache_mutex);
        return state_->stab_cache.emplace(x, std::move(sizes)).first->second;
    }

    std::size_t stab_orbit_size(std::size_t x, std::size_t y) const {
        check_point(y);
        return stab_orbit_sizes(x)[y];
    }

private:
    struct State {
        std::once_flag once;
        std::vector<Permutation> elements;
        std::mutex cache_mutex;
        std::map<std::size_t, std::vector<std::size_t>> stab_cache;
    };

    void check_point(std::size_t x) const {
        if (x >= degree_) throw ValidationError("point " + std::to_string(x) + " is outside the group domain");
    }

    std::vector<Permutation> close() const {
        std::vector<Permutation> out{identity_permutation(degree_)};
        std::unordered_set<Permutation, PermutationHash> seen(out.begin(), out.end());
        for (std::size_t i = 0; i < out.size(); ++i)
            for (const auto& g : generators_) {
                Permutation p = compose(g, out[i]);
                if (seen.insert(p).second) {
                    if (out.size() >= cap_)
                        throw CapacityError("permutation group exceeds the cap of " + std::to_string(cap_) +
                                            " elements");
                    out.push_back(std::move(p));
                }
            }
        return out;
    }

    std::size_t degree_ = 0;
    std::vector<Permutation> generators_;
    std::size_t cap_ = kDefaultGroupCap;
    std::shared_ptr<State> state_;
};

// Materialized closure of the generators, refusing groups above the cap.
inline PermGroup closure(std::size_t degree, std::vector<Permutation> gens, std::size_t cap = kDefaultGroupCap) {
    PermGroup g(degree, std::move(gens), cap);
    g.elements();
    return g;
}

}  // namespace treezeta
