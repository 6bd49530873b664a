#pragma once

#include "plrtest/trace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plrtest {

enum class DissimilarityKind { OneMinusSrcc, OneMinusPlcc };

std::string_view kind_name(DissimilarityKind kind);  ///< "srcc" / "plcc"
DissimilarityKind parse_kind(std::string_view text);

/// Pearson correlation. Throws DegenerateSeries for fewer than 3 samples or a
/// constant series, LengthMismatch for unequal lengths.
double plcc(const std::vector<double>& a, const std::vector<double>& b);

/// Spearman correlation: Pearson on average ranks.
double srcc(const std::vector<double>& a, const std::vector<double>& b);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(const std::vector<double>& values);

/// 1 - |corr(a, b)|, clamped to [0, 1].
double dissimilarity(const std::vector<double>& a, const std::vector<double>& b,
                     DissimilarityKind kind);

/// One cell of the 2^4 processing grid.
struct PipelineConfig {
    bool crop = true;
    bool motion = true;
    bool smoothing = true;
    DissimilarityKind kind = DissimilarityKind::OneMinusPlcc;

    /// e.g. "crop-motion-smooth-plcc", with "no" prefixes for disabled steps.
    std::string id() const;
    static PipelineConfig parse(std::string_view id);
    /// All 16 configurations, crop-major, SRCC before PLCC.
    static std::vector<PipelineConfig> all();

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct RapdAssessment {
    double index = 0.0;
    PipelineConfig config;
    std::optional<bool> classified_positive;
    std::optional<double> threshold_used;
    std::size_t sample_count = 0;
};

/// Motion filter and smoothing as selected by `cfg`, pairing, then the index.
/// `trace_cfg` supplies band, window, motion rule and minimum paired length;
/// its on/off switches are ignored in favour of `cfg`.
RapdAssessment assess(const PupilTrace& right, const PupilTrace& left, const PipelineConfig& cfg,
                      std::optional<double> threshold = std::nullopt,
                      const TraceConfig& trace_cfg = {});

std::string assessment_json(const RapdAssessment& a);

}  // namespace plrtest
