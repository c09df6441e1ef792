#ifndef AERIS_DATASET_HPP
#define AERIS_DATASET_HPP

#include "aeris/analytic.hpp"
#include "aeris/rng.hpp"
#include "aeris/simulator.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aeris::dataset {

inline constexpr int kFeatureCount = 13;

// Fixed feature order; also the corpus header order.
using FeatureVector = std::array<double, kFeatureCount>;

enum FeatureIndex : int {
    kGammaDb = 0,
    kElements = 1,
    kAzimuth = 2,
    kRadial = 3,
    kHeight = 4,
    kShapeS = 5,
    kShapeD = 6,
    kAlphaS = 7,
    kAlphaD = 8,
    kBetaS = 9,
    kBetaD = 10,
    kEta = 11,
    kTargetSe = 12,
};

inline constexpr const char* kCorpusHeader =
    "gamma_db,n,omega_r,r_r,h_r,m_s,m_d,alpha_s,alpha_d,beta_s,beta_d,eta,r_th,op_sim";

// Sampling ranges: scalar features uniform on [center - halfwidth,
// center + halfwidth]; position features follow the cylinder model.
struct FeatureRanges {
    double gamma_db_center = 5.0, gamma_db_halfwidth = 15.0;
    double elements_center = 20.0, elements_halfwidth = 10.0;
    double shape_center = 2.0, shape_halfwidth = 0.5;
    double alpha_center = 2.5, alpha_halfwidth = 0.5;
    double beta_center = 1.0, beta_halfwidth = 0.2;
    double eta_center = 2.7, eta_halfwidth = 0.3;
    double target_se_center = 5.0, target_se_halfwidth = 3.0;

    void validate() const;
};

struct DatasetRow {
    FeatureVector features;
    double label;  // simulated OP in [0, 1]
};

struct DatasetSplit {
    std::vector<DatasetRow> train;
    std::vector<DatasetRow> validation;
    std::vector<DatasetRow> test;
};

// Scalar features are drawn in feature order, then the platform position;
// the element count is rounded to the nearest integer (floor 1).
FeatureVector sample_features(const FeatureRanges& ranges, RngHandle& rng);

// Feature vector -> full scenario: the platform position fixes the hop
// distances, the path-loss exponent maps them to the Nakagami spreads.
analytic::SystemConfig config_from_features(const FeatureVector& features);

// Labels the feature vector with a Monte-Carlo OP estimate.
DatasetRow label_row(const FeatureVector& features, const simulator::TrialBudget& budget);

// Deterministic corpus: row i draws its features from substream 2i of
// master_seed and simulates with substream 2i+1 (budget.seed is unused
// here). Rows are independent and may be labeled by a worker pool; output
// order is by row index.
std::vector<DatasetRow> generate_dataset(std::uint64_t count, const FeatureRanges& ranges,
                                         const simulator::TrialBudget& budget,
                                         std::uint64_t master_seed);

// Seeded shuffle, then 80/10/10 split (validation and test take floor(n/10)
// rows each). Requires at least 10 rows.
DatasetSplit split_dataset(const std::vector<DatasetRow>& rows, std::uint64_t seed);

// Comma-delimited text with the exact kCorpusHeader line; floats serialized
// with shortest round-trip-exact precision.
void write_rows(const std::filesystem::path& path, const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> read_rows(const std::filesystem::path& path);

} // namespace aeris::dataset

#endif
