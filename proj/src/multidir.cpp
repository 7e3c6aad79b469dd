#include "sddf/multidir.hpp"

#include "sddf/core/rng.hpp"
#include "sddf/errors.hpp"
#include "sddf/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace sddf {

void GroupAssignment::validate(std::size_t n) const {
    if (group_of.size() != n) throw DataError("group assignment: wrong length");
    if (directions.empty()) throw DataError("group assignment: no directions");
    std::vector<std::size_t> counts(directions.size(), 0);
    for (std::size_t g : group_of) {
        if (g >= directions.size()) throw DataError("group assignment: group id out of range");
        ++counts[g];
    }
    for (std::size_t c : counts)
        if (c == 0) throw DataError("group assignment: empty group");
}

namespace {

ConditionReport check_condition_impl(const Vec& residuals, const GroupAssignment& assignment,
                                     bool concave) {
    const std::size_t n = residuals.size();
    assignment.validate(n);
    // Directions are re-normalized here so the check is invariant to any
    // positive rescaling of the stored vectors.
    std::vector<Vec> unit(assignment.directions.size());
    for (std::size_t g = 0; g < unit.size(); ++g) {
        Vec v = assignment.directions[g].gy;
        const double nrm = norm2(v);
        if (!(nrm > 0.0)) throw DataError("group assignment: zero direction");
        for (double& x : v) x /= nrm;
        unit[g] = std::move(v);
    }
    ConditionReport rep;
    rep.pair_ok.assign(n, std::vector<bool>(n, true));
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& gi = unit[assignment.group_of[i]];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Vec& gj = unit[assignment.group_of[j]];
            double inner = 0.0;
            for (std::size_t k = 0; k < gi.size(); ++k)
                inner += residuals[i] * gi[k] * (gj[k] - gi[k]);
            const bool ok = concave ? inner >= 0.0 : inner <= 0.0;
            rep.pair_ok[i][j] = ok;
            rep.all_hold = rep.all_hold && ok;
        }
    }
    return rep;
}

} // namespace

ConditionReport check_condition(const Vec& residuals, const GroupAssignment& assignment) {
    return check_condition_impl(residuals, assignment, true);
}

ConditionReport check_condition_convex(const Vec& residuals, const GroupAssignment& assignment) {
    return check_condition_impl(residuals, assignment, false);
}

ViolationReport detect_violations(const Mat& fitted_points,
                                  const std::vector<std::size_t>& group_of, double tol) {
    const std::size_t n = fitted_points.rows();
    if (fitted_points.cols() != 2) throw DataError("detect_violations: 2-D fitted points required");
    if (n < 3) throw DataError("detect_violations: need n >= 3");
    if (!group_of.empty() && group_of.size() != n)
        throw DataError("detect_violations: group assignment length mismatch");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (fitted_points(a, 0) != fitted_points(b, 0))
            return fitted_points(a, 0) < fitted_points(b, 0);
        return fitted_points(a, 1) < fitted_points(b, 1);
    });
    auto group = [&](std::size_t sorted_pos) {
        return group_of.empty() ? std::size_t{0} : group_of[order[sorted_pos]];
    };
    auto x = [&](std::size_t sorted_pos) { return fitted_points(order[sorted_pos], 0); };
    auto y = [&](std::size_t sorted_pos) { return fitted_points(order[sorted_pos], 1); };

    ViolationReport rep;
    rep.pair_count = n - 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const bool cross = group(k) != group(k + 1);
        (cross ? rep.cross_pair_count : rep.within_pair_count)++;
        // Coincident y1 values form a vertical frontier face, which a
        // downward-sloping set-valued isoquant permits; only a y2 increase
        // across distinct y1 counts.
        const bool violated = (x(k + 1) - x(k) > tol) && (y(k + 1) > y(k) + tol);
        if (violated) (cross ? rep.monotonicity_violations_cross : rep.monotonicity_violations_within)++;
    }

    rep.triplet_count = n - 2;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const bool same = group(k) == group(k + 1) && group(k + 1) == group(k + 2);
        (same ? rep.same_triplet_count : rep.mixed_triplet_count)++;
        const double x1 = x(k), x2 = x(k + 1), x3 = x(k + 2);
        const double y1 = y(k), y2 = y(k + 1), y3 = y(k + 2);
        bool violated = false;
        if (x3 - x1 > tol) {
            const double chord = y1 + (y3 - y1) * (x2 - x1) / (x3 - x1);
            violated = y2 < chord - tol;
        }
        if (violated) (same ? rep.concavity_violations_same : rep.concavity_violations_mixed)++;
    }
    return rep;
}

A4Summary run_a4_study(std::uint64_t seed, std::size_t replications, int threads, std::size_t n) {
    const double pi = std::acos(-1.0);
    const Direction dir_low = isoquant_direction_from_angle(pi / 8.0);
    const Direction dir_high = isoquant_direction_from_angle(3.0 * pi / 8.0);

    struct RepResult {
        ViolationReport low, high, multi;
        bool ok = false;
    };
    std::vector<RepResult> results(replications);

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned nthreads = threads > 0 ? static_cast<unsigned>(threads) : hw;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= replications) return;
            DgpSpec spec;
            spec.kind = DgpKind::isoquant_2d;
            spec.n = n;
            spec.lambda = 0.1;
            spec.noise_kind = NoiseModel::Kind::random_direction;
            spec.seed = derive_seed(seed, 0xa4, r);
            const IsoquantSample sample = gen_isoquant_2d(spec);
            // Groups split on the true angle: arctan(y2/y1) <= pi/4.
            std::vector<std::size_t> groups(n);
            for (std::size_t i = 0; i < n; ++i)
                groups[i] = sample.train_angles[i] <= pi / 4.0 ? 0 : 1;
            try {
                RepResult res;
                const FrontierModel low = fit_cnls_d_isoquant(sample.train, dir_low);
                res.low = detect_violations(low.fitted_outputs, groups);
                const FrontierModel high = fit_cnls_d_isoquant(sample.train, dir_high);
                res.high = detect_violations(high.fitted_outputs, groups);
                const FrontierModel multi =
                    fit_cnls_d_multidir(sample.train, groups, {dir_low, dir_high});
                res.multi = detect_violations(multi.fitted_outputs, groups);
                res.ok = true;
                results[r] = res;
            } catch (const std::exception&) {
                results[r].ok = false;
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    A4Summary sum;
    std::size_t cross_pairs = 0, cross_viol = 0, within_pairs = 0, within_viol = 0;
    std::size_t mixed_trip = 0, mixed_viol = 0, same_trip = 0, same_viol = 0;
    std::size_t good = 0;
    for (const RepResult& res : results) {
        if (!res.ok) continue;
        ++good;
        sum.single_low_monotonicity += res.low.total_monotonicity();
        sum.single_low_concavity += res.low.total_concavity();
        sum.single_high_monotonicity += res.high.total_monotonicity();
        sum.single_high_concavity += res.high.total_concavity();
        cross_pairs += res.multi.cross_pair_count;
        cross_viol += res.multi.monotonicity_violations_cross;
        within_pairs += res.multi.within_pair_count;
        within_viol += res.multi.monotonicity_violations_within;
        mixed_trip += res.multi.mixed_triplet_count;
        mixed_viol += res.multi.concavity_violations_mixed;
        same_trip += res.multi.same_triplet_count;
        same_viol += res.multi.concavity_violations_same;
    }
    if (good * 10 < replications * 9)
        throw MetricError("a4 study: more than 10% of replications failed");
    sum.replications = good;
    sum.cross_monotonicity_rate =
        cross_pairs ? static_cast<double>(cross_viol) / static_cast<double>(cross_pairs) : 0.0;
    sum.within_monotonicity_rate =
        within_pairs ? static_cast<double>(within_viol) / static_cast<double>(within_pairs) : 0.0;
    sum.mixed_concavity_rate =
        mixed_trip ? static_cast<double>(mixed_viol) / static_cast<double>(mixed_trip) : 0.0;
    sum.same_concavity_rate =
        same_trip ? static_cast<double>(same_viol) / static_cast<double>(same_trip) : 0.0;
    return sum;
}

} // namespace sddf
