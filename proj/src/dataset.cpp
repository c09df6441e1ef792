#include "aeris/dataset.hpp"
#include "aeris/errors.hpp"
#include "aeris/geometry.hpp"
#include "aeris/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace aeris::dataset {

void FeatureRanges::validate() const {
    const auto check = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(std::string("FeatureRanges: ") + what);
        }
    };
    check(gamma_db_halfwidth >= 0.0 && elements_halfwidth >= 0.0 &&
              shape_halfwidth >= 0.0 && alpha_halfwidth >= 0.0 &&
              beta_halfwidth >= 0.0 && eta_halfwidth >= 0.0 &&
              target_se_halfwidth >= 0.0,
          "halfwidths must be non-negative");
    check(shape_center - shape_halfwidth >= 0.5, "fading shape range must stay >= 0.5");
    check(alpha_center - alpha_halfwidth > 1.0, "shadowing shape range must stay > 1");
    check(beta_center - beta_halfwidth > 0.0, "shadowing scale range must stay positive");
    check(eta_center - eta_halfwidth > 0.0, "path-loss exponent range must stay positive");
    check(target_se_center - target_se_halfwidth > 0.0, "target SE range must stay positive");
    check(elements_center - elements_halfwidth >= 0.5, "element count range must round to >= 1");
}

namespace {

double uniform_in(double center, double halfwidth, RngHandle& rng) {
    return center - halfwidth + 2.0 * halfwidth * rng.uniform();
}

} // namespace

FeatureVector sample_features(const FeatureRanges& ranges, RngHandle& rng) {
    ranges.validate();
    FeatureVector f{};
    f[kGammaDb] = uniform_in(ranges.gamma_db_center, ranges.gamma_db_halfwidth, rng);
    const double n_raw = uniform_in(ranges.elements_center, ranges.elements_halfwidth, rng);
    f[kElements] = std::max(1.0, std::round(n_raw));
    const geometry::CylindricalPosition pos = geometry::sample_position(rng);
    f[kAzimuth] = pos.azimuth;
    f[kRadial] = pos.radial;
    f[kHeight] = pos.height;
    f[kShapeS] = uniform_in(ranges.shape_center, ranges.shape_halfwidth, rng);
    f[kShapeD] = uniform_in(ranges.shape_center, ranges.shape_halfwidth, rng);
    f[kAlphaS] = uniform_in(ranges.alpha_center, ranges.alpha_halfwidth, rng);
    f[kAlphaD] = uniform_in(ranges.alpha_center, ranges.alpha_halfwidth, rng);
    f[kBetaS] = uniform_in(ranges.beta_center, ranges.beta_halfwidth, rng);
    f[kBetaD] = uniform_in(ranges.beta_center, ranges.beta_halfwidth, rng);
    f[kEta] = uniform_in(ranges.eta_center, ranges.eta_halfwidth, rng);
    f[kTargetSe] = uniform_in(ranges.target_se_center, ranges.target_se_halfwidth, rng);
    return f;
}

analytic::SystemConfig config_from_features(const FeatureVector& f) {
    const geometry::CartesianPosition platform = geometry::to_cartesian(
        geometry::CylindricalPosition{f[kAzimuth], f[kRadial], f[kHeight]});
    const double d_s = std::max(geometry::distance(geometry::kSourcePosition, platform),
                                geometry::kMinSeparation);
    const double d_d = std::max(geometry::distance(platform, geometry::kDestinationPosition),
                                geometry::kMinSeparation);
    const double eta = f[kEta];
    return analytic::SystemConfig{
        static_cast<int>(f[kElements]),
        1.0,
        f[kGammaDb],
        f[kTargetSe],
        matching::HopPairParams{
            NakagamiParams(f[kShapeS], geometry::path_loss_spread(d_s, eta)),
            NakagamiParams(f[kShapeD], geometry::path_loss_spread(d_d, eta)),
            InverseGammaParams(f[kAlphaS], f[kBetaS]),
            InverseGammaParams(f[kAlphaD], f[kBetaD])},
        30};
}

DatasetRow label_row(const FeatureVector& features, const simulator::TrialBudget& budget) {
    const analytic::SystemConfig config = config_from_features(features);
    const simulator::OpEstimate estimate = simulator::estimate_op(config, budget);
    return DatasetRow{features, estimate.op};
}

std::vector<DatasetRow> generate_dataset(std::uint64_t count, const FeatureRanges& ranges,
                                         const simulator::TrialBudget& budget,
                                         std::uint64_t master_seed) {
    if (count < 1) {
        throw std::invalid_argument("generate_dataset: requires count >= 1");
    }
    ranges.validate();

    std::vector<DatasetRow> rows(count);
    std::vector<std::string> failures(count);
    const RngHandle base(master_seed);
    parallel_for_blocks(count, [&](std::size_t i) {
        try {
            RngHandle feature_rng = base.derive(2 * i);
            const FeatureVector features = sample_features(ranges, feature_rng);
            const simulator::TrialBudget row_budget{budget.trials,
                                                    base.derive(2 * i + 1).seed()};
            rows[i] = label_row(features, row_budget);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    std::string report;
    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i].empty()) {
            report += "row " + std::to_string(i) + ": " + failures[i] + "; ";
        }
    }
    if (!report.empty()) {
        throw std::runtime_error("generate_dataset: failed rows: " + report);
    }
    return rows;
}

DatasetSplit split_dataset(const std::vector<DatasetRow>& rows, std::uint64_t seed) {
    const std::size_t n = rows.size();
    if (n < 10) {
        throw std::invalid_argument("split_dataset: requires at least 10 rows");
    }

    std::vector<std::size_t> index(n);
    for (std::size_t i = 0; i < n; ++i) {
        index[i] = i;
    }
    // Fisher-Yates with multiply-shift bounded draws; fixed by the seed.
    RngHandle rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(
            (static_cast<unsigned __int128>(rng.next_u64()) * (i + 1)) >> 64);
        std::swap(index[i], index[j]);
    }

    const std::size_t n_val = n / 10;
    const std::size_t n_test = n / 10;
    const std::size_t n_train = n - n_val - n_test;

    DatasetSplit split;
    split.train.reserve(n_train);
    split.validation.reserve(n_val);
    split.test.reserve(n_test);
    for (std::size_t i = 0; i < n; ++i) {
        const DatasetRow& row = rows[index[i]];
        if (i < n_train) {
            split.train.push_back(row);
        } else if (i < n_train + n_val) {
            split.validation.push_back(row);
        } else {
            split.test.push_back(row);
        }
    }
    return split;
}

namespace {

void append_double(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

double parse_double(std::string_view field, std::size_t line_no, int column) {
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw parse_error("corpus line " + std::to_string(line_no) + ", column " +
                          std::to_string(column + 1) + ": malformed number '" +
                          std::string(field) + "'");
    }
    return value;
}

} // namespace

void write_rows(const std::filesystem::path& path, const std::vector<DatasetRow>& rows) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_rows: cannot open " + path.string());
    }
    std::string buffer;
    buffer.reserve(256);
    out << kCorpusHeader << '\n';
    for (const DatasetRow& row : rows) {
        buffer.clear();
        for (const double f : row.features) {
            append_double(buffer, f);
            buffer.push_back(',');
        }
        append_double(buffer, row.label);
        buffer.push_back('\n');
        out << buffer;
    }
    if (!out) {
        throw std::runtime_error("write_rows: write failed for " + path.string());
    }
}

std::vector<DatasetRow> read_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_rows: cannot open " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error("corpus " + path.string() + ": empty file (missing header)");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    {
        // compare field-by-field so the error names the offending column
        std::string_view got(line), want(kCorpusHeader);
        int column = 0;
        while (!want.empty()) {
            const std::size_t gpos = got.find(',');
            const std::size_t wpos = want.find(',');
            const std::string_view gfield = got.substr(0, gpos);
            const std::string_view wfield = want.substr(0, wpos);
            if (gfield != wfield) {
                throw parse_error("corpus header mismatch at column " +
                                  std::to_string(column + 1) + ": expected '" +
                                  std::string(wfield) + "', got '" + std::string(gfield) + "'");
            }
            ++column;
            got = gpos == std::string_view::npos ? std::string_view() : got.substr(gpos + 1);
            want = wpos == std::string_view::npos ? std::string_view() : want.substr(wpos + 1);
            if (want.empty() && !got.empty()) {
                throw parse_error("corpus header mismatch: unexpected extra column " +
                                  std::to_string(column + 1) + " '" + std::string(got) + "'");
            }
            if (!want.empty() && got.empty() && gpos == std::string_view::npos) {
                throw parse_error("corpus header mismatch: missing column " +
                                  std::to_string(column + 1));
            }
        }
    }

    std::vector<DatasetRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        DatasetRow row{};
        std::string_view rest(line);
        for (int c = 0; c < kFeatureCount + 1; ++c) {
            const bool last = c == kFeatureCount;
            const std::size_t pos = rest.find(',');
            if (!last && pos == std::string_view::npos) {
                throw parse_error("corpus line " + std::to_string(line_no) +
                                  ": expected 14 fields, found fewer");
            }
            if (last && pos != std::string_view::npos) {
                throw parse_error("corpus line " + std::to_string(line_no) +
                                  ": expected 14 fields, found more");
            }
            const std::string_view field = last ? rest : rest.substr(0, pos);
            const double value = parse_double(field, line_no, c);
            if (last) {
                row.label = value;
            } else {
                row.features[c] = value;
            }
            if (!last) {
                rest = rest.substr(pos + 1);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace aeris::dataset
