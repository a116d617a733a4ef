#include "npd/limit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace npd {

namespace {

constexpr std::size_t kMaxReportedFailures = 32;

// Interpolate y on the segment (a, b) of a polyline at abscissa t.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t a,
                   std::size_t b, double t) {
    if (xs[b] == xs[a]) return ys[a];
    return ys[a] + (ys[b] - ys[a]) * (t - xs[a]) / (xs[b] - xs[a]);
}

// Positive advance from `from` to `to` along the orientation, in [0, 2π).
double advance(double from, double to, Orientation orientation) {
    return orientation == Orientation::preserving ? wrap_angle(to - from) : wrap_angle(from - to);
}

}  // namespace

DenseGrid DenseGrid::dyadic(unsigned level) {
    if (level == 0 || level > 20) throw std::invalid_argument("grid level must be in 1..20");
    DenseGrid grid;
    grid.level = level;
    const std::size_t count = std::size_t{1} << level;
    grid.thetas.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid.thetas[k] = two_pi * static_cast<double>(k) / static_cast<double>(count);
    }
    return grid;
}

CouplingMap::CouplingMap(const MonotoneCoupling& coupling, const SampledCurve& x,
                         const SampledCurve& y) {
    if (coupling.n() != x.size() || coupling.m() != y.size()) {
        throw std::invalid_argument("coupling shape does not match the curves");
    }
    const auto& pairs = coupling.pairs();
    const auto n = static_cast<long long>(coupling.n());
    const auto m = static_cast<long long>(coupling.m());
    const bool reversing = coupling.orientation() == Orientation::reversing;

    long long lifted_i = static_cast<long long>(pairs.front().i);
    long long lifted_j = static_cast<long long>(pairs.front().j);
    xs_.reserve(pairs.size() + 1);
    ys_.reserve(pairs.size() + 1);
    for (std::size_t k = 0; k <= pairs.size(); ++k) {
        xs_.push_back(x.lifted_theta(lifted_i));
        ys_.push_back(y.lifted_theta(lifted_j));
        if (k == pairs.size()) break;
        const auto& a = pairs[k];
        const auto& b = pairs[(k + 1) % pairs.size()];
        lifted_i += (static_cast<long long>(b.i) - static_cast<long long>(a.i) + n) % n;
        const long long dj = reversing
                                 ? (static_cast<long long>(a.j) - static_cast<long long>(b.j) + m) % m
                                 : (static_cast<long long>(b.j) - static_cast<long long>(a.j) + m) % m;
        lifted_j += reversing ? -dj : dj;
    }
}

double CouplingMap::operator()(double theta) const {
    const double t = std::min(xs_.front() + wrap_angle(theta - xs_.front()), xs_.back());
    const auto lower = std::lower_bound(xs_.begin(), xs_.end(), t);
    const auto upper = std::upper_bound(xs_.begin(), xs_.end(), t);
    const auto a = static_cast<std::size_t>(lower - xs_.begin());
    const auto b = static_cast<std::size_t>(upper - xs_.begin());

    const double y_lo = xs_[a] == t ? ys_[a] : interpolate(xs_, ys_, a - 1, a, t);
    const double y_hi = xs_[b - 1] == t ? ys_[b - 1] : interpolate(xs_, ys_, b - 1, b, t);
    return wrap_angle(0.5 * (y_lo + y_hi));
}

bool RelationRho::fully_converged() const { return flagged_count() == 0; }

std::size_t RelationRho::flagged_count() const {
    auto flagged = [](const RhoEntry& e) { return !e.converged; };
    return static_cast<std::size_t>(std::count_if(forward.begin(), forward.end(), flagged) +
                                    std::count_if(backward.begin(), backward.end(), flagged));
}

RelationRho run_sequence_on_grid(std::span<const MonotoneCoupling> sequence, const SampledCurve& x,
                                 const SampledCurve& y, const DenseGrid& grid, double tol) {
    if (sequence.size() < 3) throw std::invalid_argument("need at least 3 couplings");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const Orientation orientation = sequence.front().orientation();
    for (const auto& f : sequence) {
        if (f.orientation() != orientation) {
            throw std::invalid_argument("couplings of a sequence must share one orientation");
        }
    }

    RelationRho rho;
    rho.grid = grid;
    rho.orientation = orientation;
    rho.tolerance = tol;
    rho.window = std::min(sequence.size(), std::max<std::size_t>(3, sequence.size() / 4));

    const auto tail = sequence.subspan(sequence.size() - rho.window);
    std::vector<CouplingMap> forward_maps;
    std::vector<CouplingMap> backward_maps;
    for (const auto& f : tail) {
        forward_maps.emplace_back(f, x, y);
        backward_maps.emplace_back(invert_coupling(f), y, x);
    }

    auto evaluate = [&](const std::vector<CouplingMap>& maps, double source) {
        std::vector<double> images;
        images.reserve(maps.size());
        for (const auto& map : maps) images.push_back(map(source));
        double diameter = 0.0;
        for (std::size_t a = 0; a < images.size(); ++a) {
            for (std::size_t b = a + 1; b < images.size(); ++b) {
                diameter = std::max(diameter, angular_distance(images[a], images[b]));
            }
        }
        return RhoEntry{source, images.back(), diameter, diameter <= tol};
    };

    for (double theta : grid.thetas) {
        rho.forward.push_back(evaluate(forward_maps, theta));
        rho.backward.push_back(evaluate(backward_maps, theta));
    }
    return rho;
}

double max_value_gap(const RelationRho& rho, const SampledCurve& x, const SampledCurve& y) {
    double worst = 0.0;
    for (const auto& e : rho.forward) {
        worst = std::max(worst, std::fabs(x.value_at(e.source) - y.value_at(e.image)));
    }
    for (const auto& e : rho.backward) {
        worst = std::max(worst, std::fabs(x.value_at(e.image) - y.value_at(e.source)));
    }
    return worst;
}

std::vector<double> default_eta_grid(const DenseGrid& grid) {
    const double r = grid.spacing();
    return {r, 2 * r, 4 * r, 8 * r};
}

LemmaReport check_lemma_properties(const RelationRho& rho, const SampledCurve& x,
                                   const SampledCurve& y, std::span<const double> eta_grid) {
    LemmaReport report;
    const double r = rho.grid.spacing();
    report.match_radius = 0.5 * r;
    report.image_slack = rho.tolerance + 2.0 * r;
    report.max_value_gap = max_value_gap(rho, x, y);
    report.value_gap_bound = rho.tolerance + sampling_slack(x, y);

    auto record = [&](LemmaFailure failure) {
        ++report.failure_count;
        if (report.failures.size() < kMaxReportedFailures) report.failures.push_back(std::move(failure));
    };

    // All stored pairs as (x, y).
    std::vector<std::pair<double, double>> pairs;
    for (const auto& e : rho.forward) pairs.emplace_back(e.source, e.image);
    for (const auto& e : rho.backward) pairs.emplace_back(e.image, e.source);

    // (i): empirical modulus of continuity of the relation in both directions.
    constexpr double rel = 1e-12;
    for (double eta : eta_grid) {
        ModulusRow row{eta, 0.0, 0.0};
        for (std::size_t a = 0; a < pairs.size(); ++a) {
            for (std::size_t b = a + 1; b < pairs.size(); ++b) {
                const double dx = angular_distance(pairs[a].first, pairs[b].first);
                const double dy = angular_distance(pairs[a].second, pairs[b].second);
                if (dx <= eta * (1 + rel)) row.forward_eps = std::max(row.forward_eps, dy);
                if (dy <= eta * (1 + rel)) row.backward_eps = std::max(row.backward_eps, dx);
            }
        }
        report.property_i_modulus.push_back(row);
    }

    // (ii): every grid point on either side has a converged partner.
    report.property_ii_ok = rho.forward.size() == rho.grid.thetas.size() &&
                            rho.backward.size() == rho.grid.thetas.size();
    for (const auto& e : rho.forward) {
        if (!e.converged) {
            report.property_ii_ok = false;
            record({"ii", "forward", {e.source, e.image}, {e.source, e.image}});
        }
    }
    for (const auto& e : rho.backward) {
        if (!e.converged) {
            report.property_ii_ok = false;
            record({"ii", "backward", {e.image, e.source}, {e.image, e.source}});
        }
    }

    // (iii): coincident sources must have coincident images, at grid resolution.
    report.property_iii_forward_ok = true;
    report.property_iii_backward_ok = true;
    for (std::size_t a = 0; a < pairs.size(); ++a) {
        for (std::size_t b = a + 1; b < pairs.size(); ++b) {
            const double dx = angular_distance(pairs[a].first, pairs[b].first);
            const double dy = angular_distance(pairs[a].second, pairs[b].second);
            if (dx <= report.match_radius && dy > report.image_slack) {
                report.property_iii_forward_ok = false;
                record({"iii", "forward", pairs[a], pairs[b]});
            }
            if (dy <= report.match_radius && dx > report.image_slack) {
                report.property_iii_backward_ok = false;
                record({"iii", "backward", pairs[a], pairs[b]});
            }
        }
    }
    report.property_iii_ok = report.property_iii_forward_ok && report.property_iii_backward_ok;
    return report;
}

MonotoneExtension::MonotoneExtension(std::vector<double> sources, std::vector<double> lifted_images,
                                     Orientation orientation)
    : sources_(std::move(sources)), images_(std::move(lifted_images)), orientation_(orientation) {
    if (sources_.size() < 2 || sources_.size() != images_.size()) {
        throw std::invalid_argument("extension needs at least two knots");
    }
}

double MonotoneExtension::operator()(double theta) const {
    const double start = sources_.front();
    const double t = start + wrap_angle(theta - start);
    const auto it = std::upper_bound(sources_.begin(), sources_.end(), t);
    const auto b = static_cast<std::size_t>(it - sources_.begin());
    const double x0 = sources_[b - 1];
    const double y0 = images_[b - 1];
    double x1;
    double y1;
    if (b == sources_.size()) {
        x1 = start + two_pi;
        y1 = images_.front() + (orientation_ == Orientation::preserving ? two_pi : -two_pi);
    } else {
        x1 = sources_[b];
        y1 = images_[b];
    }
    return wrap_angle(y0 + (y1 - y0) * (t - x0) / (x1 - x0));
}

ExtensionAttempt monotone_extension(std::span<const RhoEntry> entries, Orientation orientation) {
    ExtensionAttempt attempt;
    const std::size_t count = entries.size();
    if (count < 2) {
        attempt.violation = std::pair{0.0, two_pi};
        return attempt;
    }

    // Step k goes from knot k to knot k + 1; the last one closes the circle.
    std::vector<double> steps(count);
    double total = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        steps[k] = advance(entries[k].image, entries[(k + 1) % count].image, orientation);
        total += steps[k];
    }
    auto bad = [&](std::size_t k) { return !(steps[k] > 0.0) || steps[k] >= pi; };

    // Longest run of consecutive bad steps.
    std::size_t best_first = count;
    std::size_t best_length = 0;
    for (std::size_t k = 0; k < count;) {
        if (!bad(k)) {
            ++k;
            continue;
        }
        std::size_t length = 0;
        while (k + length < count && bad(k + length)) ++length;
        if (length > best_length) {
            best_first = k;
            best_length = length;
        }
        k += length;
    }
    if (best_length > 0) {
        const double lo = entries[best_first].source;
        const std::size_t end = best_first + best_length;
        const double hi = end < count ? entries[end].source : entries.front().source + two_pi;
        attempt.violation = std::pair{lo, hi};
        return attempt;
    }
    if (std::fabs(total - two_pi) > 1e-9) {
        attempt.violation = std::pair{0.0, two_pi};
        return attempt;
    }

    std::vector<double> sources(count);
    std::vector<double> images(count);
    double lifted = entries.front().image;
    const double sign = orientation == Orientation::preserving ? 1.0 : -1.0;
    for (std::size_t k = 0; k < count; ++k) {
        sources[k] = entries[k].source;
        images[k] = lifted;
        lifted += sign * steps[k];
    }
    attempt.map.emplace(std::move(sources), std::move(images), orientation);
    return attempt;
}

ExtensionReport extend_and_verify_optimal(const RelationRho& rho, const SampledCurve& x,
                                          const SampledCurve& y) {
    ExtensionReport report;
    report.optimality_bound = rho.tolerance + sampling_slack(x, y);
    auto attempt = monotone_extension(rho.forward, rho.orientation);
    report.violation = attempt.violation;
    if (!attempt.map) return report;

    report.extended = true;
    const MonotoneExtension& f = *attempt.map;
    for (const auto& s : x.samples()) {
        const double image = f(s.theta);
        const double psi = y.value_at(image);
        const double residual = std::fabs(s.value - psi);
        report.table.push_back({s.theta, image, s.value, psi, residual});
        report.optimality_residual = std::max(report.optimality_residual, residual);
    }
    report.optimal = report.optimality_residual <= report.optimality_bound;
    report.map = std::move(attempt.map);
    return report;
}

PipelineReport run_limit_pipeline(const SampledCurve& x, const SampledCurve& y,
                                  const PipelineOptions& options) {
    DistanceResult distance = pseudo_distance(x, y);
    const auto schedule = harmonic_schedule(options.terms);
    const auto sequence = approximating_sequence(x, y, schedule, distance);

    std::vector<double> costs;
    costs.reserve(sequence.size());
    for (const auto& f : sequence) costs.push_back(theta_cost(f, x, y));

    const DenseGrid grid = DenseGrid::dyadic(options.level);
    RelationRho rho = run_sequence_on_grid(sequence, x, y, grid, options.tol);
    const auto etas = options.eta_grid.empty() ? default_eta_grid(grid) : options.eta_grid;
    LemmaReport lemma = check_lemma_properties(rho, x, y, etas);
    ExtensionReport extension = extend_and_verify_optimal(rho, x, y);
    return PipelineReport{std::move(distance), std::move(costs), std::move(rho), std::move(lemma),
                          std::move(extension)};
}

}  // namespace npd
