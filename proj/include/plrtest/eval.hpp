#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plrtest {

struct ConfusionCounts {
    int tp = 0;
    int tn = 0;
    int fp = 0;
    int fn = 0;

    int positives() const { return tp + fn; }
    int negatives() const { return tn + fp; }
    int total() const { return tp + tn + fp + fn; }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// A case is predicted positive iff its score is strictly above `threshold`.
/// Throws LengthMismatch on unequal or empty inputs.
ConfusionCounts confusion(const std::vector<double>& scores, const std::vector<bool>& labels,
                          double threshold);

/// Each throws UndefinedRate when its denominator is zero.
double sensitivity(const ConfusionCounts& c);
double specificity(const ConfusionCounts& c);
double precision(const ConfusionCounts& c);

/// Per-field view: an undefined rate is left empty instead of throwing.
struct Rates {
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> precision;
};
Rates rates(const ConfusionCounts& c);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

/// One point per distinct score plus a sentinel above the maximum and one
/// below the minimum. Points with identical (fpr, tpr) collapse onto the one
/// with the lowest threshold; the result is sorted by fpr, then tpr, and runs
/// from (0, 0) to (1, 1). Throws SingleClass unless both labels occur.
std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<bool>& labels);

/// Trapezoidal area under a curve from roc_curve.
double auc(const std::vector<RocPoint>& roc);

enum class OperatingCriterion {
    Youden,  ///< max tpr - fpr
    MaxMin,  ///< max min(tpr, 1 - fpr)
};

/// Ties go to the higher tpr, then the lower threshold.
RocPoint operating_point(const std::vector<RocPoint>& roc,
                         OperatingCriterion criterion = OperatingCriterion::Youden);

enum class FVariant {
    Standard,  ///< (1 + b^2) P R / (b^2 P + R)
    Table2,    ///< (1 + b^2) P R / (b^2 (P + R)), reproduces the published table cells
};

/// Throws UndefinedRate on a zero denominator, ConfigError on out-of-range input.
double f_beta(double precision, double recall, double beta, FVariant variant = FVariant::Standard);

struct ManifestRow {
    std::string case_id;
    double score = 0.0;
    bool label = false;
};

struct EvalOptions {
    OperatingCriterion criterion = OperatingCriterion::Youden;
    FVariant f_variant = FVariant::Standard;
    std::vector<double> betas{0.5, 1.0, 2.0};
};

struct EvalReport {
    std::string config_id;
    ConfusionCounts counts;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double precision = 0.0;
    double auc = 0.0;
    std::map<double, double> f_scores;  ///< beta -> F
    std::vector<RocPoint> roc;
    double operating_threshold = 0.0;
};

/// ROC, operating point, then counts, rates and F-scores at that threshold.
EvalReport evaluate_manifest(const std::vector<ManifestRow>& manifest, const std::string& config_id,
                             const EvalOptions& opts = {});

std::string report_json(const EvalReport& report);

/// `case_id,score,label` with label in {0, 1}.
void write_score_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path);
std::vector<ManifestRow> read_score_manifest(const std::filesystem::path& path);

/// `threshold,fpr,tpr`
void write_roc_csv(const std::vector<RocPoint>& roc, std::ostream& out);
void write_roc_csv(const std::vector<RocPoint>& roc, const std::filesystem::path& path);

struct NamedCurve {
    std::string name;
    std::vector<RocPoint> roc;
};

/// ROC curves on the unit square, one polyline per curve.
std::string roc_svg(const std::vector<NamedCurve>& curves);
/// Index per case, split by class along x, with an optional decision line.
std::string scatter_svg(const std::vector<ManifestRow>& rows, std::optional<double> threshold,
                        const std::string& title);

}  // namespace plrtest
