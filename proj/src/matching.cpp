#include "npd/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace npd {

namespace {

// Both orientations are solved as the preserving problem: for reversing, Y is
// re-indexed by j -> (m - j) mod m.
class WorkingPair {
public:
    WorkingPair(const SampledCurve& x, const SampledCurve& y, Orientation orientation)
        : orientation_(orientation), n_(x.size()), m_(y.size()), phi_(x.values()), psi_(m_) {
        for (std::size_t j = 0; j < m_; ++j) psi_[j] = y.value(actual_j(j));
    }

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    Orientation orientation() const { return orientation_; }

    // Actual Y index of a (possibly lifted) working column.
    std::size_t actual_j(std::size_t column) const {
        const std::size_t r = column % m_;
        return orientation_ == Orientation::preserving ? r : (m_ - r) % m_;
    }
    std::size_t working_j(std::size_t actual) const { return actual_j(actual); }

    double cost(std::size_t i, std::size_t column) const {
        return std::fabs(phi_[i % n_] - psi_[column % m_]);
    }

private:
    Orientation orientation_;
    std::size_t n_;
    std::size_t m_;
    std::vector<double> phi_;
    std::vector<double> psi_;
};

using Word = std::uint64_t;

// Admissible cells at one threshold, as bit rows over 2m lifted columns, and a
// monotone reachability sweep per cyclic cut.
class ReachabilityGrid {
public:
    ReachabilityGrid(const WorkingPair& pair, double eps)
        : pair_(pair), words_((2 * pair.m() + 1 + 63) / 64), rows_(pair.n() * words_, 0),
          counts_(pair.n(), 0) {
        const std::size_t m = pair.m();
        for (std::size_t i = 0; i < pair.n(); ++i) {
            Word* row = &rows_[i * words_];
            for (std::size_t j = 0; j < m; ++j) {
                if (pair.cost(i, j) <= eps) {
                    set(row, j);
                    set(row, j + m);
                    ++counts_[i];
                }
            }
        }
    }

    bool admissible(std::size_t i, std::size_t column) const {
        return test(&rows_[(i % pair_.n()) * words_], column);
    }

    std::size_t admissible_count(std::size_t i) const { return counts_[i]; }

    // Lifted path from (cut_row, j0) to (cut_row + n, j0 + m) through
    // admissible cells?
    bool reachable(std::size_t cut_row, std::size_t j0) const {
        const std::size_t n = pair_.n();
        const std::size_t m = pair_.m();
        if (!admissible(cut_row, j0)) return false;

        std::vector<Word> window(words_, 0);
        for (std::size_t c = j0; c <= j0 + m; ++c) set(window.data(), c);

        std::vector<Word> mask(words_);
        std::vector<Word> seed(words_, 0);
        std::vector<Word> reach(words_, 0);
        std::vector<Word> scratch(words_);

        load_mask(cut_row, window, mask);
        set(seed.data(), j0);
        fill(seed, mask, reach, scratch);

        for (std::size_t k = 1; k <= n; ++k) {
            load_mask((cut_row + k) % n, window, mask);
            Word carry = 0;
            bool any = false;
            for (std::size_t w = 0; w < words_; ++w) {
                const Word shifted = (reach[w] << 1) | carry;
                carry = reach[w] >> 63;
                seed[w] = (reach[w] | shifted) & mask[w];
                any = any || seed[w] != 0;
            }
            if (!any) return false;
            fill(seed, mask, reach, scratch);
        }
        return test(reach.data(), j0 + m);
    }

private:
    static void set(Word* bits, std::size_t c) { bits[c / 64] |= Word{1} << (c % 64); }
    static bool test(const Word* bits, std::size_t c) { return (bits[c / 64] >> (c % 64)) & 1U; }

    void load_mask(std::size_t row, const std::vector<Word>& window, std::vector<Word>& mask) const {
        const Word* src = &rows_[row * words_];
        for (std::size_t w = 0; w < words_; ++w) mask[w] = src[w] & window[w];
    }

    // Extends every seed upward through its run of mask bits:
    // (((mask + seed) ^ mask) & mask) | seed, with multi-word carry.
    void fill(const std::vector<Word>& seed, const std::vector<Word>& mask, std::vector<Word>& out,
              std::vector<Word>& sum) const {
        Word carry = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            const Word a = mask[w];
            const Word s1 = a + seed[w];
            const Word c1 = s1 < a ? 1 : 0;
            const Word s2 = s1 + carry;
            const Word c2 = s2 < s1 ? 1 : 0;
            sum[w] = s2;
            carry = c1 | c2;
        }
        for (std::size_t w = 0; w < words_; ++w) {
            out[w] = ((sum[w] ^ mask[w]) & mask[w]) | seed[w];
        }
    }

    const WorkingPair& pair_;
    std::size_t words_;
    std::vector<Word> rows_;
    std::vector<std::size_t> counts_;
};

bool decide(const WorkingPair& pair, double eps) {
    ReachabilityGrid grid(pair, eps);
    // Every coupling crosses every row, so cutting at the sparsest row is enough.
    std::size_t cut_row = 0;
    for (std::size_t i = 1; i < pair.n(); ++i) {
        if (grid.admissible_count(i) < grid.admissible_count(cut_row)) cut_row = i;
    }
    for (std::size_t j0 = 0; j0 < pair.m(); ++j0) {
        if (grid.admissible(cut_row, j0) && grid.reachable(cut_row, j0)) return true;
    }
    return false;
}

std::optional<MonotoneCoupling> lexicographic_witness(const WorkingPair& pair, double eps) {
    const std::size_t n = pair.n();
    const std::size_t m = pair.m();
    ReachabilityGrid grid(pair, eps);

    for (std::size_t start = 0; start < m; ++start) {
        const std::size_t j0 = pair.working_j(start);
        if (!grid.admissible(0, j0) || !grid.reachable(0, j0)) continue;

        // Cells of the window from which the closing cell is reachable.
        const std::size_t width = m + 1;
        std::vector<char> back((n + 1) * width, 0);
        auto at = [&](std::size_t k, std::size_t c) -> char& { return back[k * width + (c - j0)]; };
        for (std::size_t k = n + 1; k-- > 0;) {
            for (std::size_t c = j0 + m + 1; c-- > j0;) {
                if (!grid.admissible(k, c)) continue;
                if (k == n && c == j0 + m) {
                    at(k, c) = 1;
                    continue;
                }
                const bool down = k < n && at(k + 1, c);
                const bool right = c < j0 + m && at(k, c + 1);
                const bool diag = k < n && c < j0 + m && at(k + 1, c + 1);
                at(k, c) = down || right || diag;
            }
        }

        std::vector<IndexPair> pairs;
        std::size_t k = 0;
        std::size_t c = j0;
        while (!(k == n && c == j0 + m)) {
            pairs.push_back({k % n, pair.actual_j(c)});
            std::optional<std::pair<std::size_t, std::size_t>> next;
            IndexPair next_pair{};
            // Closing the cycle ends the sequence, and a prefix sorts first.
            auto consider = [&](std::size_t nk, std::size_t nc) {
                if (nk > n || nc > j0 + m || !at(nk, nc)) return;
                if (next && next->first == n && next->second == j0 + m) return;
                const IndexPair candidate{nk % n, pair.actual_j(nc)};
                const bool closes = nk == n && nc == j0 + m;
                if (!next || closes || candidate < next_pair) {
                    next = {nk, nc};
                    next_pair = candidate;
                }
            };
            consider(k, c + 1);
            consider(k + 1, c);
            consider(k + 1, c + 1);
            if (!next) throw std::logic_error("witness walk left the reachable region");
            std::tie(k, c) = *next;
        }
        return MonotoneCoupling(std::move(pairs), n, m, pair.orientation());
    }
    return std::nullopt;
}

std::vector<double> candidate_costs(const SampledCurve& x, const SampledCurve& y) {
    std::vector<double> costs;
    costs.reserve(x.size() * y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            costs.push_back(std::fabs(x.value(i) - y.value(j)));
        }
    }
    std::sort(costs.begin(), costs.end());
    costs.erase(std::unique(costs.begin(), costs.end()), costs.end());
    return costs;
}

std::vector<Orientation> orientations_of(OrientationPolicy policy) {
    switch (policy) {
        case OrientationPolicy::preserving:
            return {Orientation::preserving};
        case OrientationPolicy::reversing:
            return {Orientation::reversing};
        case OrientationPolicy::both:
            break;
    }
    return {Orientation::preserving, Orientation::reversing};
}

double min_max_dp(const WorkingPair& pair) {
    const std::size_t n = pair.n();
    const std::size_t m = pair.m();
    const double inf = std::numeric_limits<double>::infinity();
    double best = inf;
    std::vector<double> prev(m + 1);
    std::vector<double> cur(m + 1);
    for (std::size_t j0 = 0; j0 < m; ++j0) {
        for (std::size_t k = 0; k <= n; ++k) {
            for (std::size_t c = 0; c <= m; ++c) {
                const double cell = pair.cost(k, j0 + c);
                double from = inf;
                if (k == 0 && c == 0) {
                    from = 0.0;
                } else {
                    if (k > 0) from = std::min(from, prev[c]);
                    if (c > 0) from = std::min(from, cur[c - 1]);
                    if (k > 0 && c > 0) from = std::min(from, prev[c - 1]);
                }
                cur[c] = std::max(cell, from);
            }
            std::swap(prev, cur);
        }
        best = std::min(best, prev[m]);
    }
    return best;
}

// Minimum summed |phi - psi| over couplings whose pairs all cost <= threshold.
MonotoneCoupling constrained_min_sum(const WorkingPair& pair, double threshold) {
    const std::size_t n = pair.n();
    const std::size_t m = pair.m();
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) counts[i] += pair.cost(i, j) <= threshold ? 1 : 0;
    }
    const auto cut_row = static_cast<std::size_t>(
        std::min_element(counts.begin(), counts.end()) - counts.begin());

    auto cell = [&](std::size_t k, std::size_t column) {
        const double v = pair.cost(cut_row + k, column);
        return v <= threshold ? v : inf;
    };

    // 0 = diagonal, 1 = from previous row, 2 = from previous column.
    std::vector<unsigned char> from;
    auto sweep = [&](std::size_t j0, bool record) {
        std::vector<double> prev(m + 1, inf);
        std::vector<double> cur(m + 1, inf);
        if (record) from.assign((n + 1) * (m + 1), 0);
        for (std::size_t k = 0; k <= n; ++k) {
            for (std::size_t c = 0; c <= m; ++c) {
                const double v = cell(k, j0 + c);
                if (k == 0 && c == 0) {
                    cur[c] = v;
                    continue;
                }
                double best = inf;
                unsigned char dir = 0;
                if (k > 0 && c > 0 && prev[c - 1] < best) {
                    best = prev[c - 1];
                    dir = 0;
                }
                if (k > 0 && prev[c] < best) {
                    best = prev[c];
                    dir = 1;
                }
                if (c > 0 && cur[c - 1] < best) {
                    best = cur[c - 1];
                    dir = 2;
                }
                cur[c] = best + v;
                if (record) from[k * (m + 1) + c] = dir;
            }
            std::swap(prev, cur);
        }
        return prev[m] - cell(0, j0);
    };

    double best_total = inf;
    std::size_t best_j0 = m;
    for (std::size_t j0 = 0; j0 < m; ++j0) {
        if (!(cell(0, j0) < inf)) continue;
        const double total = sweep(j0, false);
        if (total < best_total) {
            best_total = total;
            best_j0 = j0;
        }
    }
    if (best_j0 == m) throw std::logic_error("no coupling is feasible at the requested threshold");

    sweep(best_j0, true);
    std::vector<IndexPair> reversed;
    std::size_t k = n;
    std::size_t c = m;
    while (k > 0 || c > 0) {
        switch (from[k * (m + 1) + c]) {
            case 0:
                --k;
                --c;
                break;
            case 1:
                --k;
                break;
            default:
                --c;
                break;
        }
        reversed.push_back({(cut_row + k) % n, pair.actual_j(best_j0 + c)});
    }
    std::reverse(reversed.begin(), reversed.end());
    return MonotoneCoupling(std::move(reversed), n, m, pair.orientation());
}

}  // namespace

Feasibility feasible_at(const SampledCurve& x, const SampledCurve& y, double eps,
                        Orientation orientation) {
    if (!(eps >= 0.0)) throw std::invalid_argument("feasible_at needs eps >= 0");
    WorkingPair pair(x, y, orientation);
    auto witness = lexicographic_witness(pair, eps);
    Feasibility out;
    out.feasible = witness.has_value();
    out.witness = std::move(witness);
    return out;
}

DistanceResult pseudo_distance(const SampledCurve& x, const SampledCurve& y,
                               OrientationPolicy policy) {
    const auto orientations = orientations_of(policy);
    std::vector<WorkingPair> pairs;
    for (auto o : orientations) pairs.emplace_back(x, y, o);

    const std::vector<double> costs = candidate_costs(x, y);
    auto feasible = [&](double eps) {
        return std::any_of(pairs.begin(), pairs.end(),
                           [&](const WorkingPair& p) { return decide(p, eps); });
    };
    // The largest cost admits every cell, so it is always feasible.
    std::size_t lo = 0;
    std::size_t hi = costs.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(costs[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const double value = costs[lo];
    for (const auto& p : pairs) {
        if (auto witness = lexicographic_witness(p, value)) {
            const bool injective = witness->is_injective();
            return DistanceResult{value, std::move(*witness), p.orientation(), injective};
        }
    }
    throw std::logic_error("pseudo_distance: optimal threshold has no witness");
}

double pseudo_distance_dp(const SampledCurve& x, const SampledCurve& y, OrientationPolicy policy) {
    double best = std::numeric_limits<double>::infinity();
    for (auto o : orientations_of(policy)) best = std::min(best, min_max_dp(WorkingPair(x, y, o)));
    return best;
}

DistanceResult pseudo_distance_injective(const SampledCurve& x, const SampledCurve& y,
                                         OrientationPolicy policy) {
    const std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("injective distance needs equal sample counts");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_offset = 0;
    Orientation best_orientation = Orientation::preserving;
    for (auto o : orientations_of(policy)) {
        for (std::size_t s = 0; s < n; ++s) {
            double worst = 0.0;
            for (std::size_t i = 0; i < n && worst < best; ++i) {
                const std::size_t j = o == Orientation::preserving ? (s + i) % n : (s + n - i) % n;
                worst = std::max(worst, std::fabs(x.value(i) - y.value(j)));
            }
            if (worst < best) {
                best = worst;
                best_offset = s;
                best_orientation = o;
            }
        }
    }
    return DistanceResult{best, MonotoneCoupling::shift(n, best_offset, best_orientation),
                          best_orientation, true};
}

std::vector<double> harmonic_schedule(std::size_t terms) {
    std::vector<double> out(terms);
    for (std::size_t k = 0; k < terms; ++k) out[k] = 1.0 / static_cast<double>(k + 1);
    return out;
}

std::vector<MonotoneCoupling> approximating_sequence(const SampledCurve& x, const SampledCurve& y,
                                                     std::span<const double> schedule,
                                                     const DistanceResult& distance) {
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k] > 0.0)) throw std::invalid_argument("schedule entries must be positive");
        if (k > 0 && !(schedule[k] < schedule[k - 1])) {
            throw std::invalid_argument("schedule must be strictly decreasing");
        }
    }
    const WorkingPair pair(x, y, distance.orientation_used);
    std::vector<MonotoneCoupling> out;
    out.reserve(schedule.size());
    double previous_cost = std::numeric_limits<double>::infinity();
    for (double eps : schedule) {
        const double threshold = distance.value + eps;
        // The previous term stays optimal for the summed mismatch as long as it
        // is still admissible.
        if (!out.empty() && previous_cost <= threshold) {
            MonotoneCoupling same = out.back();
            out.push_back(std::move(same));
            continue;
        }
        out.push_back(constrained_min_sum(pair, std::min(threshold, previous_cost)));
        previous_cost = theta_cost(out.back(), x, y);
    }
    return out;
}

std::vector<MonotoneCoupling> approximating_sequence(const SampledCurve& x, const SampledCurve& y,
                                                     std::span<const double> schedule) {
    return approximating_sequence(x, y, schedule, pseudo_distance(x, y));
}

}  // namespace npd
