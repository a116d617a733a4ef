#include "npd/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace npd {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void attach(std::size_t child, std::size_t root) { parent_[child] = root; }

private:
    std::vector<std::size_t> parent_;
};

double pair_cost(const PersistencePair& a, const PersistencePair& b) {
    return std::max(std::fabs(a.birth - b.birth), std::fabs(a.death - b.death));
}

// Perfect matching in the usual diagonal-augmented bipartite graph: left side
// is A plus one diagonal slot per B pair, right side is B plus one diagonal
// slot per A pair.
bool matchable(const std::vector<PersistencePair>& a, const std::vector<PersistencePair>& b,
               double c) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t size = na + nb;
    auto edge = [&](std::size_t l, std::size_t r) {
        const bool l_real = l < na;
        const bool r_real = r < nb;
        if (l_real && r_real) return pair_cost(a[l], b[r]) <= c;
        if (l_real) return 0.5 * a[l].persistence() <= c;
        if (r_real) return 0.5 * b[r].persistence() <= c;
        return true;
    };

    std::vector<std::size_t> match_right(size, size);
    std::vector<char> seen(size);
    std::function<bool(std::size_t)> augment = [&](std::size_t l) {
        for (std::size_t r = 0; r < size; ++r) {
            if (seen[r] || !edge(l, r)) continue;
            seen[r] = 1;
            if (match_right[r] == size || augment(match_right[r])) {
                match_right[r] = l;
                return true;
            }
        }
        return false;
    };
    for (std::size_t l = 0; l < size; ++l) {
        std::fill(seen.begin(), seen.end(), 0);
        if (!augment(l)) return false;
    }
    return true;
}

}  // namespace

PersistenceDiagram sublevel_persistence(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (curve.value(i) == curve.value((i + 1) % n)) {
            throw PlateauError("plateau-present: samples " + std::to_string(i) + " and " +
                               std::to_string((i + 1) % n) + " share a value");
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return curve.value(a) != curve.value(b) ? curve.value(a) < curve.value(b) : a < b;
    });

    UnionFind sets(n);
    std::vector<char> active(n);
    // Birth sample of each root; older means lower (value, index).
    std::vector<std::size_t> birth(n);
    auto older = [&](std::size_t a, std::size_t b) {
        return curve.value(a) != curve.value(b) ? curve.value(a) < curve.value(b) : a < b;
    };

    PersistenceDiagram diagram;
    for (std::size_t v : order) {
        active[v] = 1;
        birth[v] = v;
        for (std::size_t u : {(v + n - 1) % n, (v + 1) % n}) {
            if (!active[u]) continue;
            std::size_t ru = sets.find(u);
            std::size_t rv = sets.find(v);
            if (ru == rv) continue;
            if (older(birth[rv], birth[ru])) std::swap(ru, rv);
            // ru holds the elder birth; rv's component dies here unless v
            // is its own birth (v just joined ru's component).
            if (birth[rv] != v) {
                diagram.regular.push_back({curve.value(birth[rv]), curve.value(v)});
            }
            sets.attach(rv, ru);
        }
    }
    std::sort(diagram.regular.begin(), diagram.regular.end(), [](const auto& a, const auto& b) {
        return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    });
    diagram.essential = {curve.min_value(), curve.max_value()};
    return diagram;
}

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    const double essential = pair_cost(a.essential, b.essential);

    std::vector<double> candidates{essential};
    for (const auto& p : a.regular) candidates.push_back(0.5 * p.persistence());
    for (const auto& q : b.regular) candidates.push_back(0.5 * q.persistence());
    for (const auto& p : a.regular) {
        for (const auto& q : b.regular) candidates.push_back(pair_cost(p, q));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    candidates.erase(candidates.begin(),
                     std::lower_bound(candidates.begin(), candidates.end(), essential));

    // Feasibility is monotone in the threshold and holds at the largest candidate.
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (matchable(a.regular, b.regular, candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return candidates[lo];
}

double distance_lower_bound(const SampledCurve& x, const SampledCurve& y) {
    return bottleneck_distance(sublevel_persistence(x), sublevel_persistence(y));
}

}  // namespace npd
