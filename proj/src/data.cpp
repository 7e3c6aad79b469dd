#include "sddf/data.hpp"

#include "sddf/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sddf {

DataMode Dataset::mode() const {
    if (cost) return DataMode::cost;
    if (inputs.cols() > 0) return DataMode::production;
    return DataMode::outputs_only;
}

void Dataset::validate() const {
    const std::size_t nobs = n();
    if (nobs < 1) throw DataError("dataset: n must be >= 1");
    if (num_outputs() < 1) throw DataError("dataset: Q must be >= 1");
    if (inputs.cols() > 0 && inputs.rows() != nobs)
        throw DataError("dataset: input/output row mismatch");
    if (cost) {
        if (cost->size() != nobs) throw DataError("dataset: cost length mismatch");
        if (inputs.cols() > 0) throw DataError("dataset: cost mode forbids input columns");
    }
    auto check_finite = [](double v) {
        if (!std::isfinite(v)) throw DataError("dataset: non-finite value");
    };
    for (std::size_t i = 0; i < inputs.rows(); ++i)
        for (std::size_t j = 0; j < inputs.cols(); ++j) check_finite(inputs(i, j));
    for (std::size_t i = 0; i < outputs.rows(); ++i)
        for (std::size_t j = 0; j < outputs.cols(); ++j) check_finite(outputs(i, j));
    if (cost)
        for (double v : *cost) check_finite(v);
}

Dataset Dataset::make_cost(Mat outputs, Vec cost) {
    Dataset d;
    d.outputs = std::move(outputs);
    d.cost = std::move(cost);
    for (std::size_t q = 0; q < d.outputs.cols(); ++q) d.output_labels.push_back("y" + std::to_string(q + 1));
    d.validate();
    return d;
}

Dataset Dataset::make_outputs(Mat outputs) {
    Dataset d;
    d.outputs = std::move(outputs);
    for (std::size_t q = 0; q < d.outputs.cols(); ++q) d.output_labels.push_back("y" + std::to_string(q + 1));
    d.validate();
    return d;
}

Dataset Dataset::make_production(Mat inputs, Mat outputs) {
    Dataset d;
    d.inputs = std::move(inputs);
    d.outputs = std::move(outputs);
    for (std::size_t j = 0; j < d.inputs.cols(); ++j) d.input_labels.push_back("x" + std::to_string(j + 1));
    for (std::size_t q = 0; q < d.outputs.cols(); ++q) d.output_labels.push_back("y" + std::to_string(q + 1));
    d.validate();
    return d;
}

// --- Direction ---------------------------------------------------------------

Direction Direction::make(Vec gx, Vec gy, std::optional<double> gc) {
    Direction d;
    d.gx = std::move(gx);
    d.gy = std::move(gy);
    d.gc = gc;
    double nrm = 0.0;
    for (double v : d.gx) nrm += v * v;
    for (double v : d.gy) nrm += v * v;
    if (d.gc) nrm += *d.gc * *d.gc;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) throw DataError("direction: at least one component must be positive");
    for (double& v : d.gx) v /= nrm;
    for (double& v : d.gy) v /= nrm;
    if (d.gc) *d.gc /= nrm;
    d.validate();
    return d;
}

Direction Direction::outputs_only(Vec gy) { return make({}, std::move(gy), std::nullopt); }

Direction Direction::cost_mode(Vec gy, double gc) { return make({}, std::move(gy), gc); }

Vec Direction::concat() const {
    Vec v = gx;
    v.insert(v.end(), gy.begin(), gy.end());
    if (gc) v.push_back(*gc);
    return v;
}

std::size_t Direction::dim() const { return gx.size() + gy.size() + (gc ? 1 : 0); }

void Direction::validate() const {
    double nrm = 0.0;
    bool positive = false;
    auto visit = [&](double v) {
        if (!std::isfinite(v)) throw DataError("direction: non-finite component");
        if (v < 0.0) throw DataError("direction: components must be nonnegative");
        if (v > 0.0) positive = true;
        nrm += v * v;
    };
    for (double v : gx) visit(v);
    for (double v : gy) visit(v);
    if (gc) visit(*gc);
    if (!positive) throw DataError("direction: all components are zero");
    if (std::fabs(std::sqrt(nrm) - 1.0) > 1e-9) throw DataError("direction: not unit-normalized");
}

Direction direction_from_angle(double theta) {
    if (theta < 0.0 || theta > std::acos(-1.0) / 2.0 + 1e-12)
        throw DataError("direction angle must lie in [0, pi/2]");
    return Direction::cost_mode({std::max(0.0, std::cos(theta))}, std::max(0.0, std::sin(theta)));
}

Direction isoquant_direction_from_angle(double theta) {
    if (theta < 0.0 || theta > std::acos(-1.0) / 2.0 + 1e-12)
        throw DataError("direction angle must lie in [0, pi/2]");
    return Direction::outputs_only({std::max(0.0, std::cos(theta)), std::max(0.0, std::sin(theta))});
}

// --- normalization -----------------------------------------------------------

namespace {

ColumnScale column_scale(const double* first, std::size_t n, std::size_t stride) {
    ColumnScale s;
    s.min = s.max = first[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double v = first[i * stride];
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.degenerate = !(s.max > s.min);
    return s;
}

double apply_scale(double v, const ColumnScale& s) {
    return s.degenerate ? 0.0 : (v - s.min) / (s.max - s.min);
}

} // namespace

NormalizedDataset normalize(const Dataset& data, bool strict) {
    data.validate();
    if (data.n() < 2) throw DataError("normalize: need n >= 2");
    NormalizedDataset out;
    const std::size_t n = data.n(), q = data.num_outputs();
    out.outputs = Mat(n, q);
    for (std::size_t j = 0; j < q; ++j) {
        const ColumnScale s = column_scale(data.outputs.data() + j, n, q);
        if (s.degenerate && strict) throw DataError("normalize: degenerate output column " + std::to_string(j + 1));
        out.any_degenerate = out.any_degenerate || s.degenerate;
        out.scale_info.outputs.push_back(s);
        for (std::size_t i = 0; i < n; ++i) out.outputs(i, j) = apply_scale(data.outputs(i, j), s);
    }
    if (data.cost) {
        const ColumnScale s = column_scale(data.cost->data(), n, 1);
        if (s.degenerate && strict) throw DataError("normalize: degenerate cost column");
        out.any_degenerate = out.any_degenerate || s.degenerate;
        out.scale_info.cost = s;
        out.cost = Vec(n);
        for (std::size_t i = 0; i < n; ++i) (*out.cost)[i] = apply_scale((*data.cost)[i], s);
    }
    return out;
}

NormalizedDataset normalize_with(const Dataset& data, const ScaleInfo& scale) {
    data.validate();
    if (scale.outputs.size() != data.num_outputs())
        throw DataError("normalize_with: scale info has wrong output count");
    if (data.cost.has_value() != scale.cost.has_value())
        throw DataError("normalize_with: cost presence mismatch");
    NormalizedDataset out;
    out.scale_info = scale;
    const std::size_t n = data.n(), q = data.num_outputs();
    out.outputs = Mat(n, q);
    for (std::size_t j = 0; j < q; ++j) {
        out.any_degenerate = out.any_degenerate || scale.outputs[j].degenerate;
        for (std::size_t i = 0; i < n; ++i)
            out.outputs(i, j) = apply_scale(data.outputs(i, j), scale.outputs[j]);
    }
    if (data.cost) {
        out.cost = Vec(n);
        out.any_degenerate = out.any_degenerate || scale.cost->degenerate;
        for (std::size_t i = 0; i < n; ++i) (*out.cost)[i] = apply_scale((*data.cost)[i], *scale.cost);
    }
    return out;
}

Dataset denormalize(const NormalizedDataset& data) {
    const std::size_t n = data.outputs.rows(), q = data.outputs.cols();
    Mat outputs(n, q);
    for (std::size_t j = 0; j < q; ++j) {
        const ColumnScale& s = data.scale_info.outputs.at(j);
        for (std::size_t i = 0; i < n; ++i)
            outputs(i, j) = s.degenerate ? s.min : s.min + data.outputs(i, j) * (s.max - s.min);
    }
    if (!data.cost) return Dataset::make_outputs(std::move(outputs));
    Vec cost(n);
    const ColumnScale& s = *data.scale_info.cost;
    for (std::size_t i = 0; i < n; ++i)
        cost[i] = s.degenerate ? s.min : s.min + (*data.cost)[i] * (s.max - s.min);
    return Dataset::make_cost(std::move(outputs), std::move(cost));
}

// --- medians -----------------------------------------------------------------

double quantile(Vec values, double q) {
    if (values.empty()) throw DataError("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw DataError("quantile: q outside [0,1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double median(const Vec& values) { return quantile(values, 0.5); }

MedianDirection median_direction(const NormalizedDataset& norm) {
    if (!norm.cost) throw DataError("median_direction: cost mode required");
    const std::size_t n = norm.outputs.rows(), q = norm.outputs.cols();
    if (n < 1) throw DataError("median_direction: empty dataset");
    Vec raw;
    for (std::size_t j = 0; j < q; ++j) {
        Vec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = norm.outputs(i, j);
        raw.push_back(median(col));
    }
    raw.push_back(1.0 - median(*norm.cost));
    double nrm = 0.0;
    for (double v : raw) nrm += v * v;
    if (!(nrm > 0.0)) throw DataError("median_direction: all-zero median vector");
    MedianDirection md;
    md.raw = raw;
    Vec gy(raw.begin(), raw.end() - 1);
    md.direction = Direction::cost_mode(std::move(gy), raw.back());
    return md;
}

// --- noise model ---------------------------------------------------------------

NoiseModel NoiseModel::random(double lambda) {
    NoiseModel m;
    m.kind = Kind::random_direction;
    m.lambda = lambda;
    m.validate();
    return m;
}

NoiseModel NoiseModel::fixed_angle(double lambda, double theta) {
    return fixed_vector(lambda, {std::cos(theta), std::sin(theta)});
}

NoiseModel NoiseModel::fixed_vector(double lambda, Vec v) {
    NoiseModel m;
    m.kind = Kind::fixed_direction;
    m.lambda = lambda;
    double nrm = norm2(v);
    if (!(nrm > 0.0)) throw DataError("noise model: zero fixed direction");
    for (double& x : v) x /= nrm;
    m.fixed_direction = std::move(v);
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    if (lambda < 0.0) throw DataError("noise model: lambda must be nonnegative");
    if (kind == Kind::fixed_direction) {
        if (std::fabs(norm2(fixed_direction) - 1.0) > 1e-9)
            throw DataError("noise model: fixed direction must be unit-normalized");
    }
}

// --- CSV -----------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_number(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    while (ptr != last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
    if (ec != std::errc{} || ptr != last)
        throw DataError("csv: bad numeric field '" + s + "' on line " + std::to_string(line_no));
    return v;
}

} // namespace

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: empty file " + path);
    const std::vector<std::string> header = split_csv_line(line);

    // Column roles: x<k>, y<k>, or c.
    std::vector<int> x_col(header.size(), -1), y_col(header.size(), -1);
    int cost_col = -1;
    std::size_t d = 0, q = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string& h = header[j];
        if (h == "c") {
            if (cost_col >= 0) throw DataError("csv: duplicate cost column");
            cost_col = static_cast<int>(j);
            continue;
        }
        if (h.size() >= 2 && (h[0] == 'x' || h[0] == 'y')) {
            std::size_t k = 0;
            try {
                k = std::stoul(h.substr(1));
            } catch (...) {
                throw DataError("csv: unrecognized column '" + h + "'");
            }
            if (k == 0) throw DataError("csv: column indices start at 1, got '" + h + "'");
            if (h[0] == 'x') {
                x_col[j] = static_cast<int>(k - 1);
                d = std::max(d, k);
            } else {
                y_col[j] = static_cast<int>(k - 1);
                q = std::max(q, k);
            }
            continue;
        }
        throw DataError("csv: unrecognized column '" + h + "'");
    }
    if (q == 0) throw DataError("csv: no output columns (y1..yQ) found");

    std::vector<Vec> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError("csv: wrong field count on line " + std::to_string(line_no));
        Vec vals(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) vals[j] = parse_number(fields[j], line_no);
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw DataError("csv: no data rows in " + path);

    const std::size_t n = rows.size();
    Dataset ds;
    ds.inputs = Mat(n, d);
    ds.outputs = Mat(n, q);
    if (cost_col >= 0) ds.cost = Vec(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (x_col[j] >= 0) ds.inputs(i, static_cast<std::size_t>(x_col[j])) = rows[i][j];
            else if (y_col[j] >= 0) ds.outputs(i, static_cast<std::size_t>(y_col[j])) = rows[i][j];
            else if (static_cast<int>(j) == cost_col) (*ds.cost)[i] = rows[i][j];
        }
    for (std::size_t j = 0; j < d; ++j) ds.input_labels.push_back("x" + std::to_string(j + 1));
    for (std::size_t j = 0; j < q; ++j) ds.output_labels.push_back("y" + std::to_string(j + 1));
    ds.validate();
    return ds;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("csv: cannot write " + path);
    std::string header;
    for (std::size_t j = 0; j < data.num_inputs(); ++j)
        header += "x" + std::to_string(j + 1) + ",";
    for (std::size_t j = 0; j < data.num_outputs(); ++j)
        header += "y" + std::to_string(j + 1) + ",";
    if (data.cost) header += "c";
    else if (!header.empty()) header.pop_back();
    out << header << '\n';
    char buf[40];
    auto put = [&](double v, bool last) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << (last ? '\n' : ',');
    };
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.num_inputs(); ++j) put(data.inputs(i, j), false);
        for (std::size_t j = 0; j < data.num_outputs(); ++j)
            put(data.outputs(i, j), !data.cost && j + 1 == data.num_outputs());
        if (data.cost) put((*data.cost)[i], true);
    }
    if (!out) throw DataError("csv: write failed for " + path);
}

} // namespace sddf
