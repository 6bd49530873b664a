#include "plrtest/rapd.hpp"

#include "plrtest/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace plrtest {

std::string_view kind_name(DissimilarityKind kind) {
    return kind == DissimilarityKind::OneMinusSrcc ? "srcc" : "plcc";
}

DissimilarityKind parse_kind(std::string_view text) {
    if (text == "srcc") return DissimilarityKind::OneMinusSrcc;
    if (text == "plcc") return DissimilarityKind::OneMinusPlcc;
    throw ConfigError("unknown dissimilarity kind '" + std::string(text) + "'");
}

namespace {

void check_pair(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw LengthMismatch("series lengths differ: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    if (a.size() < 3) throw DegenerateSeries("correlation needs at least 3 paired samples");
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double plcc(const std::vector<double>& a, const std::vector<double>& b) {
    check_pair(a, b);
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw DegenerateSeries("series has zero variance");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

double srcc(const std::vector<double>& a, const std::vector<double>& b) {
    check_pair(a, b);
    return plcc(average_ranks(a), average_ranks(b));
}

double dissimilarity(const std::vector<double>& a, const std::vector<double>& b,
                     DissimilarityKind kind) {
    const double r = kind == DissimilarityKind::OneMinusSrcc ? srcc(a, b) : plcc(a, b);
    return std::clamp(1.0 - std::fabs(r), 0.0, 1.0);
}

std::string PipelineConfig::id() const {
    std::string s;
    s += crop ? "crop" : "nocrop";
    s += motion ? "-motion" : "-nomotion";
    s += smoothing ? "-smooth" : "-nosmooth";
    s += '-';
    s += kind_name(kind);
    return s;
}

PipelineConfig PipelineConfig::parse(std::string_view id) {
    for (const auto& c : all()) {
        if (c.id() == id) return c;
    }
    throw ConfigError("unknown configuration '" + std::string(id) + "'");
}

std::vector<PipelineConfig> PipelineConfig::all() {
    std::vector<PipelineConfig> out;
    for (bool crop : {true, false})
        for (bool motion : {true, false})
            for (bool smoothing : {true, false})
                for (auto kind : {DissimilarityKind::OneMinusSrcc, DissimilarityKind::OneMinusPlcc})
                    out.push_back({crop, motion, smoothing, kind});
    return out;
}

RapdAssessment assess(const PupilTrace& right, const PupilTrace& left, const PipelineConfig& cfg,
                      std::optional<double> threshold, const TraceConfig& trace_cfg) {
    trace_cfg.validate();
    PupilTrace r = right;
    PupilTrace l = left;
    if (cfg.motion) {
        r = motion_filter(r, trace_cfg);
        l = motion_filter(l, trace_cfg);
    }
    if (cfg.smoothing) {
        r = median_smooth(r, trace_cfg);
        l = median_smooth(l, trace_cfg);
    }
    const PairedSeries paired = pair_traces(r, l);
    if (paired.right.size() < trace_cfg.min_paired)
        throw DegenerateSeries("only " + std::to_string(paired.right.size()) +
                               " paired samples, need " + std::to_string(trace_cfg.min_paired));

    RapdAssessment out;
    out.config = cfg;
    out.sample_count = paired.right.size();
    out.index = dissimilarity(paired.right, paired.left, cfg.kind);
    if (threshold) {
        out.threshold_used = *threshold;
        out.classified_positive = out.index > *threshold;
    }
    return out;
}

std::string assessment_json(const RapdAssessment& a) {
    nlohmann::ordered_json j;
    j["index"] = a.index;
    j["kind"] = kind_name(a.config.kind);
    j["crop"] = a.config.crop;
    j["motion"] = a.config.motion;
    j["smoothing"] = a.config.smoothing;
    j["positive"] = a.classified_positive ? nlohmann::ordered_json(*a.classified_positive) : nullptr;
    j["threshold"] = a.threshold_used ? nlohmann::ordered_json(*a.threshold_used) : nullptr;
    j["samples"] = a.sample_count;
    return j.dump();
}

}  // namespace plrtest
