#include "npd/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace npd {

std::string_view to_string(Orientation orientation) {
    return orientation == Orientation::preserving ? "preserving" : "reversing";
}

std::optional<Orientation> parse_orientation(std::string_view text) {
    if (text == "preserving") return Orientation::preserving;
    if (text == "reversing") return Orientation::reversing;
    return std::nullopt;
}

std::size_t canonical_rotation(const std::vector<IndexPair>& pairs) {
    const std::size_t len = pairs.size();
    std::size_t best = len;
    for (std::size_t s = 0; s < len; ++s) {
        if (pairs[s].i != 0) continue;
        if (best == len) {
            best = s;
            continue;
        }
        for (std::size_t k = 0; k < len; ++k) {
            const auto& a = pairs[(s + k) % len];
            const auto& b = pairs[(best + k) % len];
            if (a < b) {
                best = s;
                break;
            }
            if (b < a) break;
        }
    }
    return best == len ? 0 : best;
}

namespace {

std::size_t forward_step(std::size_t from, std::size_t to, std::size_t modulus) {
    return (to + modulus - from) % modulus;
}

}  // namespace

MonotoneCoupling::MonotoneCoupling(std::vector<IndexPair> pairs, std::size_t n, std::size_t m,
                                   Orientation orientation)
    : pairs_(std::move(pairs)), n_(n), m_(m), orientation_(orientation) {
    if (n_ < 2 || m_ < 2) throw std::invalid_argument("coupling needs n, m >= 2");
    if (pairs_.empty()) throw std::invalid_argument("coupling has no pairs");
    std::size_t sum_i = 0;
    std::size_t sum_j = 0;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
        const auto& a = pairs_[k];
        const auto& b = pairs_[(k + 1) % pairs_.size()];
        if (a.i >= n_ || a.j >= m_) {
            throw std::out_of_range("coupling pair " + std::to_string(k) + " out of range");
        }
        const std::size_t di = forward_step(a.i, b.i, n_);
        const std::size_t dj = orientation_ == Orientation::preserving ? forward_step(a.j, b.j, m_)
                                                                       : forward_step(b.j, a.j, m_);
        if (di > 1 || dj > 1 || (di == 0 && dj == 0)) {
            throw std::invalid_argument("coupling step " + std::to_string(k) +
                                        " is not a monotone staircase step");
        }
        sum_i += di;
        sum_j += dj;
    }
    if (sum_i != n_ || sum_j != m_) {
        throw std::invalid_argument("coupling does not wind exactly once around both curves");
    }
    std::rotate(pairs_.begin(), pairs_.begin() + static_cast<std::ptrdiff_t>(canonical_rotation(pairs_)),
                pairs_.end());
}

MonotoneCoupling::MonotoneCoupling(trusted_tag, std::vector<IndexPair> pairs, std::size_t n,
                                   std::size_t m, Orientation orientation)
    : pairs_(std::move(pairs)), n_(n), m_(m), orientation_(orientation) {}

MonotoneCoupling MonotoneCoupling::identity(std::size_t n) { return shift(n, 0); }

MonotoneCoupling MonotoneCoupling::shift(std::size_t n, std::size_t offset, Orientation orientation) {
    std::vector<IndexPair> pairs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = orientation == Orientation::preserving ? (offset + i) % n
                                                                     : (offset % n + n - i) % n;
        pairs[i] = {i, j};
    }
    return MonotoneCoupling(std::move(pairs), n, n, orientation);
}

bool MonotoneCoupling::is_injective() const {
    return pairs_.size() == n_ && pairs_.size() == m_;
}

double theta_cost(const MonotoneCoupling& coupling, const SampledCurve& x, const SampledCurve& y) {
    if (coupling.n() != x.size() || coupling.m() != y.size()) {
        throw std::out_of_range("coupling shape does not match the curves");
    }
    double worst = 0.0;
    for (const auto& [i, j] : coupling.pairs()) {
        worst = std::max(worst, std::fabs(x.value(i) - y.value(j)));
    }
    return worst;
}

MonotoneCoupling invert_coupling(const MonotoneCoupling& coupling) {
    std::vector<IndexPair> swapped;
    swapped.reserve(coupling.size());
    for (const auto& [i, j] : coupling.pairs()) swapped.push_back({j, i});
    // Reversing couplings step i backwards as j advances; walk them in reverse
    // so the new first coordinate increases.
    if (coupling.orientation() == Orientation::reversing) {
        std::reverse(swapped.begin(), swapped.end());
    }
    return MonotoneCoupling(std::move(swapped), coupling.m(), coupling.n(), coupling.orientation());
}

void enumerate_couplings(std::size_t n, std::size_t m, Orientation orientation,
                         const std::function<void(const MonotoneCoupling&)>& visit) {
    if (n < 2 || m < 2) throw std::invalid_argument("enumeration needs n, m >= 2");
    if (n * m > 64) throw std::invalid_argument("enumeration is limited to n * m <= 64");

    auto actual_j = [&](std::size_t lifted) {
        const std::size_t r = lifted % m;
        return orientation == Orientation::preserving ? r : (m - r) % m;
    };

    std::vector<IndexPair> path;
    // Depth-first over lifted lattice paths (0, j0) -> (n, j0 + m); the final
    // point closes the cycle and is not emitted.
    std::function<void(std::size_t, std::size_t, std::size_t)> walk =
        [&](std::size_t li, std::size_t lj, std::size_t end_j) {
            if (li == n && lj == end_j) {
                if (canonical_rotation(path) == 0) {
                    visit(MonotoneCoupling(MonotoneCoupling::trusted_tag{}, path, n, m, orientation));
                }
                return;
            }
            path.push_back({li % n, actual_j(lj)});
            if (li < n && lj < end_j) walk(li + 1, lj + 1, end_j);
            if (li < n) walk(li + 1, lj, end_j);
            if (lj < end_j) walk(li, lj + 1, end_j);
            path.pop_back();
        };

    for (std::size_t j0 = 0; j0 < m; ++j0) walk(0, j0, j0 + m);
}

}  // namespace npd
