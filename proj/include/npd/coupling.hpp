#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "npd/curve.hpp"

namespace npd {

enum class Orientation { preserving, reversing };

std::string_view to_string(Orientation orientation);
std::optional<Orientation> parse_orientation(std::string_view text);

struct IndexPair {
    std::size_t i;
    std::size_t j;

    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

// Discrete stand-in for a circle homeomorphism X -> Y: a cyclic staircase of
// index pairs whose steps are (1,0), (0,1) or (1,1) modulo (n, m), with j read
// backwards when the orientation is reversing. Winding is one in each factor,
// so every index of either curve is covered.
//
// The pair sequence is stored in canonical rotation: among the rotations that
// start at a pair with i == 0, the lexicographically smallest one.
class MonotoneCoupling {
public:
    MonotoneCoupling(std::vector<IndexPair> pairs, std::size_t n, std::size_t m,
                     Orientation orientation);

    static MonotoneCoupling identity(std::size_t n);
    // Pairs (i, offset + i) for preserving, (i, offset - i) for reversing.
    static MonotoneCoupling shift(std::size_t n, std::size_t offset,
                                  Orientation orientation = Orientation::preserving);

    const std::vector<IndexPair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    Orientation orientation() const { return orientation_; }

    // No repeated i and no repeated j.
    bool is_injective() const;

    friend bool operator==(const MonotoneCoupling&, const MonotoneCoupling&) = default;

private:
    struct trusted_tag {};
    MonotoneCoupling(trusted_tag, std::vector<IndexPair> pairs, std::size_t n, std::size_t m,
                     Orientation orientation);
    friend void enumerate_couplings(std::size_t, std::size_t, Orientation,
                                    const std::function<void(const MonotoneCoupling&)>&);

    std::vector<IndexPair> pairs_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    Orientation orientation_ = Orientation::preserving;
};

// Index of the canonical starting rotation of a cyclic pair sequence.
std::size_t canonical_rotation(const std::vector<IndexPair>& pairs);

// Natural size measure of the coupling: max |phi(i) - psi(j)| over its pairs.
double theta_cost(const MonotoneCoupling& coupling, const SampledCurve& x, const SampledCurve& y);

MonotoneCoupling invert_coupling(const MonotoneCoupling& coupling);

// Visits every coupling of the given shape exactly once (canonical rotation).
// Brute-force oracle; refuses n * m > 64.
void enumerate_couplings(std::size_t n, std::size_t m, Orientation orientation,
                         const std::function<void(const MonotoneCoupling&)>& visit);

}  // namespace npd
