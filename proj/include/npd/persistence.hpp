#pragma once

#include <utility>
#include <vector>

#include "npd/curve.hpp"

namespace npd {

struct PersistencePair {
    double birth;
    double death;

    double persistence() const { return death - birth; }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

// 0-dimensional sublevel persistence of a function on the circle. Regular
// pairs are sorted by (birth, death); the essential pair is (min, max).
struct PersistenceDiagram {
    std::vector<PersistencePair> regular;
    PersistencePair essential{0.0, 0.0};

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

// Union-find sweep over samples in (value, index) order. When two components
// meet the younger one dies at the merging value; the merge that closes the
// circle produces no pair. Throws PlateauError on equal adjacent values.
PersistenceDiagram sublevel_persistence(const SampledCurve& curve);

// Bottleneck distance. Regular pairs may match each other at the sup-norm of
// the coordinate differences or go to the diagonal at half their persistence;
// the essential pairs always match each other.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

// Bottleneck distance of the two sublevel diagrams; a lower bound for the
// pseudo-distance up to sampling slack.
double distance_lower_bound(const SampledCurve& x, const SampledCurve& y);

}  // namespace npd
