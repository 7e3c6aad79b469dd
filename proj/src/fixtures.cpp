#include "sddf/fixtures.hpp"

#include "sddf/core/rng.hpp"
#include "sddf/errors.hpp"

#include <cmath>

namespace sddf {

void HospitalFixtureSpec::validate() const {
    if (n < 2) throw ConfigError("hospital fixture: n must be >= 2");
    if (noise_sd < 0.0) throw ConfigError("hospital fixture: noise sd must be nonnegative");
    const std::size_t q = log_means.size();
    if (q == 0 || log_sds.size() != q || exponents.size() != q)
        throw ConfigError("hospital fixture: parameter vectors must share one length");
    for (double s : log_sds)
        if (!(s > 0.0)) throw ConfigError("hospital fixture: log sd must be positive");
    for (double e : exponents)
        if (!(e > 1.0)) throw ConfigError("hospital fixture: exponents must exceed 1");
    if (!(aggregate_exponent > 1.0))
        throw ConfigError("hospital fixture: aggregate exponent must exceed 1");
    if (!(base_cost >= 0.0) || !(term_at_median > 0.0) || !(aggregate_at_median >= 0.0))
        throw ConfigError("hospital fixture: bad cost rule constants");
}

namespace {

struct CostRule {
    Vec coef;           // additive power terms
    Vec weights;        // aggregate-output weights (1/median_q)
    double agg_coef;    // aggregate term coefficient

    double operator()(const HospitalFixtureSpec& spec, const Vec& y) const {
        double c = spec.base_cost;
        double agg = 0.0;
        for (std::size_t q = 0; q < y.size(); ++q) {
            const double v = std::max(y[q], 0.0);
            c += coef[q] * std::pow(v, spec.exponents[q]);
            agg += weights[q] * v;
        }
        c += agg_coef * std::pow(agg, spec.aggregate_exponent);
        return c;
    }
};

CostRule make_rule(const HospitalFixtureSpec& spec) {
    CostRule rule;
    const std::size_t q = spec.log_means.size();
    rule.coef.resize(q);
    rule.weights.resize(q);
    for (std::size_t k = 0; k < q; ++k) {
        const double median_k = std::exp(spec.log_means[k]);
        rule.coef[k] = spec.term_at_median / std::pow(median_k, spec.exponents[k]);
        rule.weights[k] = 1.0 / median_k;
    }
    // At the median bundle the weighted aggregate equals Q.
    rule.agg_coef =
        spec.aggregate_at_median / std::pow(static_cast<double>(q), spec.aggregate_exponent);
    return rule;
}

} // namespace

double hospital_cost_rule(const HospitalFixtureSpec& spec, const Vec& y) {
    spec.validate();
    if (y.size() != spec.log_means.size())
        throw DataError("hospital cost rule: dimension mismatch");
    return make_rule(spec)(spec, y);
}

Dataset gen_hospital_fixture(const HospitalFixtureSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const std::size_t n = spec.n, q = spec.log_means.size();
    const CostRule rule = make_rule(spec);
    Mat outputs(n, q);
    Vec cost(n);
    Vec y(q);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < q; ++k) {
            y[k] = std::exp(spec.log_means[k] + spec.log_sds[k] * rng.normal());
            outputs(i, k) = y[k];
        }
        cost[i] = rule(spec, y) * std::exp(spec.noise_sd * rng.normal());
    }
    return Dataset::make_cost(std::move(outputs), std::move(cost));
}

double sample_skewness(const Vec& values) {
    const std::size_t n = values.size();
    if (n < 3) throw DataError("skewness: need n >= 3");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (!(m2 > 0.0)) throw DataError("skewness: degenerate sample");
    return m3 / std::pow(m2, 1.5);
}

} // namespace sddf
