#include "plrtest/eval.hpp"

#include "plrtest/error.hpp"
#include "plrtest/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace plrtest {

ConfusionCounts confusion(const std::vector<double>& scores, const std::vector<bool>& labels,
                          double threshold) {
    if (scores.size() != labels.size())
        throw LengthMismatch("scores and labels differ in length");
    if (scores.empty()) throw LengthMismatch("no cases");
    ConfusionCounts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] > threshold;
        if (labels[i]) {
            (predicted ? c.tp : c.fn) += 1;
        } else {
            (predicted ? c.fp : c.tn) += 1;
        }
    }
    return c;
}

double sensitivity(const ConfusionCounts& c) {
    if (c.positives() == 0) throw UndefinedRate("sensitivity: no positive cases");
    return static_cast<double>(c.tp) / c.positives();
}

double specificity(const ConfusionCounts& c) {
    if (c.negatives() == 0) throw UndefinedRate("specificity: no negative cases");
    return static_cast<double>(c.tn) / c.negatives();
}

double precision(const ConfusionCounts& c) {
    if (c.tp + c.fp == 0) throw UndefinedRate("precision: no positive predictions");
    return static_cast<double>(c.tp) / (c.tp + c.fp);
}

Rates rates(const ConfusionCounts& c) {
    Rates r;
    if (c.positives() > 0) r.sensitivity = sensitivity(c);
    if (c.negatives() > 0) r.specificity = specificity(c);
    if (c.tp + c.fp > 0) r.precision = precision(c);
    return r;
}

std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size())
        throw LengthMismatch("scores and labels differ in length");
    const auto pos = std::count(labels.begin(), labels.end(), true);
    const auto neg = static_cast<std::ptrdiff_t>(labels.size()) - pos;
    if (pos == 0 || neg == 0) throw SingleClass("ROC needs both positive and negative cases");

    std::set<double> distinct(scores.begin(), scores.end());
    std::vector<double> thresholds(distinct.begin(), distinct.end());
    thresholds.push_back(*distinct.rbegin() + 1.0);
    thresholds.push_back(*distinct.begin() - 1.0);
    std::sort(thresholds.begin(), thresholds.end());

    std::vector<RocPoint> points;
    for (const double t : thresholds) {  // ascending, so the first of a duplicate run is the lowest
        const ConfusionCounts c = confusion(scores, labels, t);
        const RocPoint p{t, static_cast<double>(c.fp) / static_cast<double>(neg),
                         static_cast<double>(c.tp) / static_cast<double>(pos)};
        const bool seen = std::any_of(points.begin(), points.end(), [&](const RocPoint& q) {
            return q.fpr == p.fpr && q.tpr == p.tpr;
        });
        if (!seen) points.push_back(p);
    }
    std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
    });
    return points;
}

double auc(const std::vector<RocPoint>& roc) {
    double area = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i)
        area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
    return std::clamp(area, 0.0, 1.0);
}

RocPoint operating_point(const std::vector<RocPoint>& roc, OperatingCriterion criterion) {
    if (roc.empty()) throw ConfigError("operating point of an empty ROC");
    auto score = [&](const RocPoint& p) {
        return criterion == OperatingCriterion::Youden ? p.tpr - p.fpr : std::min(p.tpr, 1.0 - p.fpr);
    };
    RocPoint best = roc.front();
    for (const auto& p : roc) {
        const double s = score(p);
        const double b = score(best);
        if (s > b || (s == b && (p.tpr > best.tpr || (p.tpr == best.tpr && p.threshold < best.threshold))))
            best = p;
    }
    return best;
}

double f_beta(double precision, double recall, double beta, FVariant variant) {
    if (!(precision >= 0.0 && precision <= 1.0 && recall >= 0.0 && recall <= 1.0))
        throw ConfigError("f_beta: precision and recall must lie in [0, 1]");
    if (!(beta > 0.0)) throw ConfigError("f_beta: beta must be positive");
    const double b2 = beta * beta;
    const double denom = variant == FVariant::Standard ? b2 * precision + recall
                                                       : b2 * (precision + recall);
    if (denom == 0.0) throw UndefinedRate("f_beta: precision and recall are both zero");
    return (1.0 + b2) * precision * recall / denom;
}

EvalReport evaluate_manifest(const std::vector<ManifestRow>& manifest, const std::string& config_id,
                             const EvalOptions& opts) {
    std::vector<double> scores;
    std::vector<bool> labels;
    for (const auto& row : manifest) {
        scores.push_back(row.score);
        labels.push_back(row.label);
    }
    EvalReport r;
    r.config_id = config_id;
    r.roc = roc_curve(scores, labels);
    r.auc = auc(r.roc);
    const RocPoint op = operating_point(r.roc, opts.criterion);
    r.operating_threshold = op.threshold;
    r.counts = confusion(scores, labels, op.threshold);
    r.sensitivity = sensitivity(r.counts);
    r.specificity = specificity(r.counts);
    r.precision = precision(r.counts);
    for (const double beta : opts.betas) r.f_scores[beta] = f_beta(r.precision, r.sensitivity, beta, opts.f_variant);
    return r;
}

std::string report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["config"] = report.config_id;
    j["counts"] = {{"tp", report.counts.tp}, {"tn", report.counts.tn},
                   {"fp", report.counts.fp}, {"fn", report.counts.fn}};
    j["sensitivity"] = report.sensitivity;
    j["specificity"] = report.specificity;
    j["precision"] = report.precision;
    j["auc"] = report.auc;
    nlohmann::ordered_json f = nlohmann::ordered_json::object();
    for (const auto& [beta, value] : report.f_scores) f[format_double(beta)] = value;
    j["f_scores"] = f;
    j["operating_threshold"] = report.operating_threshold;
    nlohmann::ordered_json roc = nlohmann::ordered_json::array();
    for (const auto& p : report.roc) roc.push_back({{"threshold", p.threshold}, {"fpr", p.fpr}, {"tpr", p.tpr}});
    j["roc"] = roc;
    return j.dump(2);
}

void write_score_manifest(const std::vector<ManifestRow>& rows, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "case_id,score,label\n";
    for (const auto& r : rows) out << r.case_id << ',' << format_double(r.score) << ',' << (r.label ? 1 : 0) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<ManifestRow> read_score_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "case_id,score,label")
        throw FormatError(path.string() + ": expected header case_id,score,label");
    std::vector<ManifestRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw FormatError(path.string() + ": expected 3 fields in '" + line + "'");
        const int label = parse_int(f[2], "label");
        if (label != 0 && label != 1) throw FormatError(path.string() + ": label must be 0 or 1");
        rows.push_back({f[0], parse_double(f[1], "score"), label == 1});
    }
    return rows;
}

void write_roc_csv(const std::vector<RocPoint>& roc, std::ostream& out) {
    out << "threshold,fpr,tpr\n";
    for (const auto& p : roc)
        out << format_double(p.threshold) << ',' << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

void write_roc_csv(const std::vector<RocPoint>& roc, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_roc_csv(roc, out);
    if (!out) throw IoError("write failed for " + path.string());
}

namespace {

constexpr double kPlot = 400.0;
constexpr double kMargin = 50.0;

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                   "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

void axes(std::ostringstream& svg, const std::string& xlabel, const std::string& ylabel) {
    svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot << "\" height=\""
        << kPlot << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kMargin + kPlot / 2 << "\" y=\"" << kMargin * 1.8 + kPlot
        << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xlabel) << "</text>\n";
    svg << "<text x=\"14\" y=\"" << kMargin + kPlot / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 "
        << kMargin + kPlot / 2 << ")\" text-anchor=\"middle\">" << escape(ylabel) << "</text>\n";
}

}  // namespace

std::string roc_svg(const std::vector<NamedCurve>& curves) {
    const double legend = 14.0 * static_cast<double>(curves.size());
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlot + 2 * kMargin + 260 << "\" height=\""
        << std::max(kPlot + 2 * kMargin, legend + 2 * kMargin) << "\">\n";
    axes(svg, "false positive rate", "true positive rate");
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin + kPlot << "\" x2=\"" << kMargin + kPlot
        << "\" y2=\"" << kMargin << "\" stroke=\"#ccc\" stroke-dasharray=\"4 4\"/>\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        svg << "<polyline fill=\"none\" stroke=\"" << palette(i) << "\" points=\"";
        for (const auto& p : curves[i].roc)
            svg << kMargin + p.fpr * kPlot << ',' << kMargin + (1.0 - p.tpr) * kPlot << ' ';
        svg << "\"/>\n";
        const double y = kMargin + 12.0 + 14.0 * static_cast<double>(i);
        svg << "<text x=\"" << kMargin * 1.4 + kPlot << "\" y=\"" << y << "\" font-size=\"11\" fill=\""
            << palette(i) << "\">" << escape(curves[i].name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string scatter_svg(const std::vector<ManifestRow>& rows, std::optional<double> threshold,
                        const std::string& title) {
    double hi = 1e-9;
    for (const auto& r : rows) hi = std::max(hi, r.score);
    if (threshold) hi = std::max(hi, *threshold);
    hi *= 1.05;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlot + 2 * kMargin << "\" height=\""
        << kPlot + 2 * kMargin << "\">\n";
    svg << "<text x=\"" << kMargin << "\" y=\"" << kMargin * 0.6 << "\" font-size=\"13\">" << escape(title)
        << "</text>\n";
    axes(svg, "healthy | RAPD", "RAPD index");
    std::size_t count[2] = {0, 0};
    std::size_t total[2] = {0, 0};
    for (const auto& r : rows) ++total[r.label ? 1 : 0];
    for (const auto& r : rows) {
        const int cls = r.label ? 1 : 0;
        const double slot = (static_cast<double>(count[cls]++) + 0.5) / static_cast<double>(total[cls]);
        const double x = kMargin + kPlot * (0.5 * cls + 0.1 + 0.3 * slot);
        const double y = kMargin + kPlot * (1.0 - r.score / hi);
        svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\"" << (r.label ? "#d62728" : "#1f77b4")
            << "\"><title>" << escape(r.case_id) << "</title></circle>\n";
    }
    if (threshold) {
        const double y = kMargin + kPlot * (1.0 - *threshold / hi);
        svg << "<line x1=\"" << kMargin << "\" y1=\"" << y << "\" x2=\"" << kMargin + kPlot << "\" y2=\"" << y
            << "\" stroke=\"black\" stroke-dasharray=\"6 3\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace plrtest
