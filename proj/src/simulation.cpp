#include "sddf/simulation.hpp"

#include "sddf/core/rng.hpp"
#include "sddf/errors.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace sddf {

namespace {
const double kPi = std::acos(-1.0);
} // namespace

AngleSpec AngleSpec::uniform() { return {}; }

AngleSpec AngleSpec::normal(double mean, double sd) {
    AngleSpec s;
    s.dist = Dist::truncated_normal;
    s.a = mean;
    s.b = sd;
    return s;
}

AngleSpec AngleSpec::gamma(double shape, double scale) {
    AngleSpec s;
    s.dist = Dist::truncated_gamma;
    s.a = shape;
    s.b = scale;
    return s;
}

void DgpSpec::validate() const {
    if (n < 2) throw ConfigError("dgp: n must be >= 2");
    if (lambda < 0.0) throw ConfigError("dgp: lambda must be nonnegative");
    if (noise_kind == NoiseModel::Kind::fixed_direction &&
        (noise_angle < 0.0 || noise_angle > kPi / 2.0))
        throw ConfigError("dgp: fixed noise angle must lie in [0, pi/2]");
    switch (angle.dist) {
        case AngleSpec::Dist::uniform: break;
        case AngleSpec::Dist::truncated_normal:
            if (!(angle.b > 0.0)) throw ConfigError("dgp: normal angle sd must be positive");
            break;
        case AngleSpec::Dist::truncated_gamma:
            if (!(angle.a > 0.0) || !(angle.b > 0.0))
                throw ConfigError("dgp: gamma angle parameters must be positive");
            break;
    }
}

namespace {

double draw_angle(Rng& rng, const AngleSpec& spec) {
    switch (spec.dist) {
        case AngleSpec::Dist::uniform: return rng.uniform(0.0, kPi / 2.0);
        case AngleSpec::Dist::truncated_normal:
            return rng.truncated_normal(spec.a, spec.b, 0.0, kPi / 2.0);
        case AngleSpec::Dist::truncated_gamma:
            return rng.truncated_gamma(spec.a, spec.b, 0.0, kPi / 2.0);
    }
    throw ConfigError("dgp: unknown angle distribution");
}

// Unit vector from componentwise U[-1,1] draws; zero-norm draws rejected.
Vec random_unit(Rng& rng, std::size_t dim) {
    for (;;) {
        Vec v(dim);
        double nrm = 0.0;
        for (double& x : v) {
            x = rng.uniform(-1.0, 1.0);
            nrm += x * x;
        }
        if (nrm > 1e-24) {
            nrm = std::sqrt(nrm);
            for (double& x : v) x /= nrm;
            return v;
        }
    }
}

double sample_sd(const Vec& v) {
    const std::size_t n = v.size();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

struct LinearDraw {
    Dataset noisy;
    Dataset truth;
    double eps0 = 0.0;
};

LinearDraw draw_linear(Rng& rng, const DgpSpec& spec, bool with_noise) {
    const std::size_t n = spec.n;
    Vec ytrue(n), ctrue(n);
    for (std::size_t i = 0; i < n; ++i) {
        ytrue[i] = rng.uniform01();
        ctrue[i] = ytrue[i]; // beta_0 = 1
    }
    LinearDraw out;
    out.eps0 = 0.5 * (sample_sd(ytrue) + sample_sd(ctrue));
    Mat ty(n, 1);
    for (std::size_t i = 0; i < n; ++i) ty(i, 0) = ytrue[i];
    out.truth = Dataset::make_cost(std::move(ty), Vec(ctrue));
    if (!with_noise) {
        out.noisy = out.truth;
        return out;
    }
    Mat ny(n, 1);
    Vec nc(n);
    const double sd = spec.lambda * out.eps0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec v;
        if (spec.noise_kind == NoiseModel::Kind::random_direction) {
            v = random_unit(rng, 2);
        } else {
            v = {std::cos(spec.noise_angle), std::sin(spec.noise_angle)};
        }
        const double len = rng.normal(0.0, sd);
        ny(i, 0) = ytrue[i] + len * v[0];
        nc[i] = ctrue[i] + len * v[1];
    }
    out.noisy = Dataset::make_cost(std::move(ny), std::move(nc));
    return out;
}

} // namespace

LinearSample gen_linear(const DgpSpec& spec) {
    spec.validate();
    if (spec.kind != DgpKind::linear_2d) throw ConfigError("gen_linear: wrong DGP kind");
    Rng rng(spec.seed);
    LinearSample out;
    LinearDraw train = draw_linear(rng, spec, true);
    out.train = std::move(train.noisy);
    out.epsilon0_train = train.eps0;
    LinearDraw test_true = draw_linear(rng, spec, false);
    out.test_true = std::move(test_true.truth);
    LinearDraw test_noisy = draw_linear(rng, spec, true);
    out.test_noisy = std::move(test_noisy.noisy);
    out.epsilon0_test = test_noisy.eps0;
    return out;
}

IsoquantSample gen_isoquant_2d(const DgpSpec& spec) {
    spec.validate();
    if (spec.kind != DgpKind::isoquant_2d) throw ConfigError("gen_isoquant_2d: wrong DGP kind");
    Rng rng(spec.seed);
    const std::size_t n = spec.n;
    IsoquantSample out;
    out.train = Mat(n, 2);
    out.train_angles.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = draw_angle(rng, spec.angle);
        out.train_angles[i] = th;
        const double len = rng.normal(0.0, spec.lambda);
        double th_eps;
        if (spec.noise_kind == NoiseModel::Kind::random_direction) {
            th_eps = rng.uniform(-kPi / 2.0, kPi / 2.0);
        } else {
            th_eps = spec.noise_angle;
        }
        out.train(i, 0) = std::cos(th) + len * std::cos(th_eps);
        out.train(i, 1) = std::sin(th) + len * std::sin(th_eps);
    }
    out.test = Mat(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = draw_angle(rng, spec.angle);
        out.test(i, 0) = std::cos(th);
        out.test(i, 1) = std::sin(th);
    }
    return out;
}

IsoquantSample gen_isoquant_3d(const DgpSpec& spec) {
    spec.validate();
    if (spec.kind != DgpKind::isoquant_3d) throw ConfigError("gen_isoquant_3d: wrong DGP kind");
    Rng rng(spec.seed);
    const std::size_t n = spec.n;
    auto sphere_point = [&rng]() {
        Vec l(3);
        double nrm = 0.0;
        do {
            nrm = 0.0;
            for (double& x : l) {
                x = rng.uniform01();
                nrm += x * x;
            }
        } while (nrm < 1e-24);
        nrm = std::sqrt(nrm);
        for (double& x : l) x /= nrm;
        return l;
    };
    IsoquantSample out;
    out.train = Mat(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec p = sphere_point();
        const Vec v = random_unit(rng, 3);
        const double len = rng.normal(0.0, spec.lambda);
        for (std::size_t k = 0; k < 3; ++k) out.train(i, k) = p[k] + len * v[k];
    }
    out.test = Mat(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec p = sphere_point();
        for (std::size_t k = 0; k < 3; ++k) out.test(i, k) = p[k];
    }
    return out;
}

std::vector<Direction> direction_grid_3d() {
    const double levels[3] = {0.0, 0.5, 1.0};
    std::vector<Direction> dirs;
    for (double a : levels)
        for (double b : levels)
            for (double c : levels) {
                if (a == 0.0 && b == 0.0 && c == 0.0) continue;
                const Direction d = Direction::outputs_only({a, b, c});
                bool dup = false;
                for (const Direction& e : dirs) {
                    double diff = 0.0;
                    for (std::size_t k = 0; k < 3; ++k)
                        diff = std::max(diff, std::fabs(d.gy[k] - e.gy[k]));
                    if (diff < 1e-12) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) dirs.push_back(d);
            }
    return dirs;
}

ExperimentReport run_grid(const GridSpec& spec, const CellFn& cell) {
    if (spec.dgp_cells == 0 || spec.sub_rows == 0 || spec.cols == 0 || spec.replications == 0)
        throw ConfigError("run_grid: empty axis");
    const std::size_t tasks = spec.dgp_cells * spec.replications;
    std::vector<Mat> blocks(tasks);
    std::vector<char> failed(tasks, 0);

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned nthreads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : hw;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks) return;
            const std::size_t dgp = t / spec.replications;
            const std::size_t rep = t % spec.replications;
            const std::uint64_t rep_seed = derive_seed(spec.master_seed, dgp, rep);
            try {
                Mat block = cell(dgp, rep_seed);
                if (block.rows() != spec.sub_rows || block.cols() != spec.cols)
                    throw MetricError("run_grid: cell block has wrong shape");
                blocks[t] = std::move(block);
            } catch (const std::exception&) {
                failed[t] = 1;
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

    ExperimentReport rep;
    rep.replications = spec.replications;
    rep.master_seed = spec.master_seed;
    rep.values = Mat(spec.dgp_cells * spec.sub_rows, spec.cols);
    rep.failure_counts = Mat(spec.dgp_cells * spec.sub_rows, spec.cols);
    for (std::size_t dgp = 0; dgp < spec.dgp_cells; ++dgp) {
        std::size_t fails = 0;
        for (std::size_t r = 0; r < spec.replications; ++r)
            fails += failed[dgp * spec.replications + r];
        const std::size_t good = spec.replications - fails;
        if (static_cast<double>(fails) >
            spec.max_cell_failure_share * static_cast<double>(spec.replications))
            throw MetricError("run_grid: DGP cell " + std::to_string(dgp) + " had " +
                              std::to_string(fails) + " failed replications of " +
                              std::to_string(spec.replications));
        for (std::size_t r = 0; r < spec.replications; ++r) {
            const std::size_t t = dgp * spec.replications + r;
            if (failed[t]) continue;
            for (std::size_t sr = 0; sr < spec.sub_rows; ++sr)
                for (std::size_t c = 0; c < spec.cols; ++c)
                    rep.values(dgp * spec.sub_rows + sr, c) += blocks[t](sr, c);
        }
        for (std::size_t sr = 0; sr < spec.sub_rows; ++sr)
            for (std::size_t c = 0; c < spec.cols; ++c) {
                rep.values(dgp * spec.sub_rows + sr, c) /= static_cast<double>(good);
                rep.failure_counts(dgp * spec.sub_rows + sr, c) = static_cast<double>(fails);
            }
    }
    return rep;
}

} // namespace sddf
