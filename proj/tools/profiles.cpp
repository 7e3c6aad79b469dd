#include "commands.hpp"

#include "sddf/data.hpp"
#include "sddf/errors.hpp"
#include "sddf/estimators.hpp"
#include "sddf/evaluation.hpp"
#include "sddf/io.hpp"
#include "sddf/multidir.hpp"
#include "sddf/simulation.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

namespace sddf::cli {

namespace {

const double kPi = std::acos(-1.0);
const std::vector<double> kFiveAngles{0.0, kPi / 8.0, kPi / 4.0, 3.0 * kPi / 8.0, kPi / 2.0};
const std::vector<std::string> kFiveLabels{"0", "pi/8", "pi/4", "3pi/8", "pi/2"};

std::vector<Direction> five_isoquant_directions() {
    std::vector<Direction> dirs;
    for (double th : kFiveAngles) dirs.push_back(isoquant_direction_from_angle(th));
    return dirs;
}

// Radial MSE of CNLS-d isoquant fits across estimation directions on one
// generated sample; one row per call.
Mat isoquant_cell(const DgpSpec& base, std::uint64_t rep_seed,
                  const std::vector<Direction>& dirs) {
    DgpSpec spec = base;
    spec.seed = rep_seed;
    const IsoquantSample sample =
        spec.kind == DgpKind::isoquant_2d ? gen_isoquant_2d(spec) : gen_isoquant_3d(spec);
    Mat row(1, dirs.size());
    for (std::size_t c = 0; c < dirs.size(); ++c) {
        const FrontierModel m = fit_cnls_d_isoquant(sample.train, dirs[c]);
        row(0, c) = radial_mse_isoquant(m, sample.test).value;
    }
    return row;
}

// Directional MSE of the parametric DDF across (MSE direction x DDF
// direction); the test set is the noiseless truth or the noisy draw.
Mat parametric_cell(const DgpSpec& base, std::uint64_t rep_seed, bool out_of_sample) {
    DgpSpec spec = base;
    spec.seed = rep_seed;
    const LinearSample sample = gen_linear(spec);
    const Dataset& test = out_of_sample ? sample.test_noisy : sample.test_true;
    Mat block(kFiveAngles.size(), kFiveAngles.size());
    for (std::size_t c = 0; c < kFiveAngles.size(); ++c) {
        const LinearDdfModel m = fit_parametric_ddf(sample.train, direction_from_angle(kFiveAngles[c]));
        for (std::size_t r = 0; r < kFiveAngles.size(); ++r) {
            const MseReport rep = directional_mse(m, test, direction_from_angle(kFiveAngles[r]));
            block(r, c) = rep.value;
        }
    }
    return block;
}

void emit(const std::string& path_base, ExperimentReport report,
          const std::map<std::string, std::string>& extra) {
    write_experiment_csv(path_base + ".csv", report);
    write_experiment_metadata(path_base + "_meta.json", report, extra);
    std::cout << "wrote " << path_base << ".csv" << std::endl;
}

GridSpec make_grid(const ExperimentArgs& args, std::size_t dgp_cells, std::size_t sub_rows,
                   std::size_t cols) {
    GridSpec gs;
    gs.dgp_cells = dgp_cells;
    gs.sub_rows = sub_rows;
    gs.cols = cols;
    gs.replications = args.replications;
    gs.master_seed = args.seed;
    gs.threads = args.threads;
    return gs;
}

void profile_isoquant_fixed_noise(const ExperimentArgs& args, double lambda,
                                  const std::string& out) {
    const auto dirs = five_isoquant_directions();
    DgpSpec base;
    base.kind = DgpKind::isoquant_2d;
    base.n = args.n;
    base.lambda = lambda;
    base.noise_kind = NoiseModel::Kind::fixed_direction;
    ExperimentReport rep = run_grid(
        make_grid(args, kFiveAngles.size(), 1, dirs.size()),
        [&](std::size_t dgp, std::uint64_t rep_seed) {
            DgpSpec spec = base;
            spec.noise_angle = kFiveAngles[dgp];
            return isoquant_cell(spec, rep_seed, dirs);
        });
    rep.row_labels = kFiveLabels;
    rep.col_labels = kFiveLabels;
    rep.display_scale = 1e4;
    rep.title = "radial MSE to the true isoquant, fixed noise directions, lambda=" +
                std::to_string(lambda);
    emit(out, std::move(rep),
         {{"lambda", std::to_string(lambda)}, {"rows", "noise direction angle"},
          {"cols", "estimator direction angle"}});
}

void profile_parametric(const ExperimentArgs& args, bool fixed_noise, const std::string& out) {
    DgpSpec base;
    base.kind = DgpKind::linear_2d;
    base.n = args.n;
    base.lambda = args.lambda > 0.0 ? args.lambda : 0.6;
    const std::size_t dgp_cells = fixed_noise ? kFiveAngles.size() : 1;
    for (const bool oos : {false, true}) {
        ExperimentReport rep = run_grid(
            make_grid(args, dgp_cells, kFiveAngles.size(), kFiveAngles.size()),
            [&](std::size_t dgp, std::uint64_t rep_seed) {
                DgpSpec spec = base;
                if (fixed_noise) {
                    spec.noise_kind = NoiseModel::Kind::fixed_direction;
                    spec.noise_angle = kFiveAngles[dgp];
                }
                return parametric_cell(spec, rep_seed, oos);
            });
        rep.col_labels = kFiveLabels;
        for (std::size_t d = 0; d < dgp_cells; ++d)
            for (const std::string& mse : kFiveLabels)
                rep.row_labels.push_back(fixed_noise ? "noise " + kFiveLabels[d] + " / mse " + mse
                                                     : "mse " + mse);
        rep.display_scale = 1e3;
        rep.title = std::string(fixed_noise ? "fixed" : "random") + " noise, " +
                    (oos ? "out-of-sample" : "true-function") + " directional MSE";
        emit(out + (oos ? "_oos" : "_true"), std::move(rep),
             {{"lambda", std::to_string(base.lambda)}, {"cols", "DDF direction angle"}});
    }
}

} // namespace

void cmd_experiment(const ExperimentArgs& args) {
    if (args.profile == "exp1") {
        const auto dirs = five_isoquant_directions();
        DgpSpec base;
        base.kind = DgpKind::isoquant_2d;
        base.n = args.n;
        base.lambda = args.lambda > 0.0 ? args.lambda : 0.1;
        ExperimentReport rep =
            run_grid(make_grid(args, 1, 1, dirs.size()),
                     [&](std::size_t, std::uint64_t rep_seed) { return isoquant_cell(base, rep_seed, dirs); });
        rep.row_labels = {"average"};
        rep.col_labels = kFiveLabels;
        rep.display_scale = 1e4;
        rep.title = "radial MSE to the true isoquant, random noise, lambda=" +
                    std::to_string(base.lambda);
        emit(args.out, std::move(rep), {{"lambda", std::to_string(base.lambda)}});
        return;
    }
    if (args.profile == "exp2") {
        profile_isoquant_fixed_noise(args, args.lambda > 0.0 ? args.lambda : 0.1, args.out);
        return;
    }
    if (args.profile == "exp3") {
        if (args.lambda > 0.0) {
            profile_isoquant_fixed_noise(args, args.lambda, args.out);
        } else {
            profile_isoquant_fixed_noise(args, 0.05, args.out + "_lambda005");
            profile_isoquant_fixed_noise(args, 0.2, args.out + "_lambda02");
        }
        return;
    }
    if (args.profile == "exp4" || args.profile == "exp5") {
        const auto dirs = five_isoquant_directions();
        std::vector<AngleSpec> rows;
        std::vector<std::string> labels;
        if (args.profile == "exp4") {
            for (double mean : {kPi / 8.0, kPi / 4.0, 3.0 * kPi / 8.0}) {
                rows.push_back(AngleSpec::normal(mean, kPi / 16.0));
                labels.push_back("normal(" + std::to_string(mean) + ")");
            }
        } else {
            rows.push_back(AngleSpec::normal(kPi / 4.0, kPi / 16.0));
            rows.push_back(AngleSpec::gamma(3.0, kPi / 2.0));
            rows.push_back(AngleSpec::gamma(0.5, kPi / 24.0));
            labels = {"normal(pi/4,pi/16)", "gamma(3,pi/2)", "gamma(0.5,pi/24)"};
        }
        DgpSpec base;
        base.kind = DgpKind::isoquant_2d;
        base.n = args.n;
        base.lambda = args.lambda > 0.0 ? args.lambda : 0.1;
        ExperimentReport rep = run_grid(
            make_grid(args, rows.size(), 1, dirs.size()),
            [&](std::size_t dgp, std::uint64_t rep_seed) {
                DgpSpec spec = base;
                spec.angle = rows[dgp];
                return isoquant_cell(spec, rep_seed, dirs);
            });
        rep.row_labels = labels;
        rep.col_labels = kFiveLabels;
        rep.display_scale = 1e4;
        rep.title = "radial MSE by observation-angle distribution";
        emit(args.out, std::move(rep), {{"lambda", std::to_string(base.lambda)}});
        return;
    }
    if (args.profile == "exp6") {
        const std::vector<Direction> dirs = direction_grid_3d();
        DgpSpec base;
        base.kind = DgpKind::isoquant_3d;
        base.n = args.n;
        base.lambda = args.lambda > 0.0 ? args.lambda : 0.1;
        ExperimentReport wide =
            run_grid(make_grid(args, 1, 1, dirs.size()),
                     [&](std::size_t, std::uint64_t rep_seed) { return isoquant_cell(base, rep_seed, dirs); });
        // One row per direction, mirroring the published table layout.
        ExperimentReport rep;
        rep.replications = wide.replications;
        rep.master_seed = wide.master_seed;
        rep.display_scale = 1e4;
        rep.title = "radial MSE on the 3-output isoquant across 19 directions";
        rep.values = Mat(dirs.size(), 1);
        rep.failure_counts = Mat(dirs.size(), 1);
        rep.col_labels = {"avg_radial_mse"};
        char label[64];
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            rep.values(d, 0) = wide.values(0, d);
            rep.failure_counts(d, 0) = wide.failure_counts(0, d);
            std::snprintf(label, sizeof label, "(%.2f %.2f %.2f)", dirs[d].gy[0], dirs[d].gy[1],
                          dirs[d].gy[2]);
            rep.row_labels.push_back(label);
        }
        emit(args.out, std::move(rep), {{"lambda", std::to_string(base.lambda)}});
        return;
    }
    if (args.profile == "b1-parametric-random") {
        profile_parametric(args, /*fixed_noise=*/false, args.out);
        return;
    }
    if (args.profile == "b1-parametric-fixed") {
        profile_parametric(args, /*fixed_noise=*/true, args.out);
        return;
    }
    if (args.profile == "a4") {
        const A4Summary sum = run_a4_study(args.seed, args.replications, args.threads, args.n);
        std::ofstream out(args.out + ".csv");
        if (!out) throw DataError("cannot write " + args.out + ".csv");
        out << a4_summary_to_csv(sum);
        nlohmann::json j;
        j["replications"] = sum.replications;
        j["seed"] = args.seed;
        j["cross_monotonicity_rate"] = sum.cross_monotonicity_rate;
        j["within_monotonicity_rate"] = sum.within_monotonicity_rate;
        j["mixed_concavity_rate"] = sum.mixed_concavity_rate;
        j["same_concavity_rate"] = sum.same_concavity_rate;
        j["single_direction_violations"] =
            sum.single_low_monotonicity + sum.single_low_concavity + sum.single_high_monotonicity +
            sum.single_high_concavity;
        std::ofstream meta(args.out + "_meta.json");
        meta << j.dump(2) << '\n';
        std::cout << j.dump(2) << std::endl;
        return;
    }
    throw ConfigError("unknown experiment profile: " + args.profile);
}

} // namespace sddf::cli
