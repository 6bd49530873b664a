#include "plrtest/cli.hpp"

#include "plrtest/error.hpp"
#include "plrtest/eval.hpp"
#include "plrtest/pipeline.hpp"
#include "plrtest/rapd.hpp"
#include "plrtest/synth.hpp"
#include "plrtest/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace plrtest {

namespace {

// Thrown for flag combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto& s : split_csv_line(text)) {
        if (!s.empty()) out.push_back(s);
    }
    return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, const char* what, Parse parse) {
    std::vector<T> out;
    try {
        for (const auto& s : split_list(text)) out.push_back(parse(s, what));
    } catch (const FormatError& e) {
        throw UsageError(e.what());
    }
    if (out.empty()) throw UsageError(std::string("empty list for ") + what);
    return out;
}

// ---------------------------------------------------------------- detector flags

struct DetectorFlags {
    std::string calibration;
    std::optional<double> canny;
    std::optional<int> acc_threshold;
    std::optional<int> acc_bin;
    int rays = StarburstConfig{}.num_rays;
    int threshold_step = StarburstConfig{}.threshold_step;

    void add(CLI::App& app) {
        app.add_option("--calibration", calibration, "calibration.json whose best tuple sets the Hough defaults");
        app.add_option("--canny-threshold", canny, "edge level on the Sobel magnitude (intensity units)");
        app.add_option("--accumulator-threshold", acc_threshold, "minimum votes for an accepted circle");
        app.add_option("--accumulator-bin", acc_bin, "pixels per accumulator cell and radius step");
        app.add_option("--rays", rays, "Starburst rays per iteration")->capture_default_str();
        app.add_option("--threshold-step", threshold_step, "Starburst threshold decrement")->capture_default_str();
    }

    DetectorConfig build() const {
        DetectorConfig cfg;
        if (!calibration.empty()) {
            std::ifstream in(calibration);
            if (!in) throw IoError("cannot open " + calibration);
            try {
                const auto j = nlohmann::json::parse(in);
                const auto& best = j.at("best");
                cfg.hough.canny_threshold = best.at("canny_threshold").get<double>();
                cfg.hough.accumulator_threshold = best.at("accumulator_threshold").get<int>();
                cfg.hough.accumulator_bin = best.at("accumulator_bin").get<int>();
            } catch (const nlohmann::json::exception& e) {
                throw FormatError(calibration + ": " + e.what());
            }
        }
        if (canny) cfg.hough.canny_threshold = *canny;
        if (acc_threshold) cfg.hough.accumulator_threshold = *acc_threshold;
        if (acc_bin) cfg.hough.accumulator_bin = *acc_bin;
        cfg.starburst.num_rays = rays;
        cfg.starburst.threshold_step = threshold_step;
        try {
            cfg.hough.validate();
            cfg.starburst.validate();
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

struct TraceFlags {
    double band = TraceConfig{}.motion_band_frac;
    int window = TraceConfig{}.smooth_window;
    std::string rule = "either";

    void add(CLI::App& app) {
        app.add_option("--motion-band", band, "motion band as a fraction of the mean centre coordinate")
            ->capture_default_str();
        app.add_option("--smooth-window", window, "median window (odd)")->capture_default_str();
        app.add_option("--motion-rule", rule, "either: invalidate on any axis; both: only when both axes leave the band")
            ->check(CLI::IsMember({"either", "both"}))
            ->capture_default_str();
    }

    TraceConfig build() const {
        TraceConfig cfg;
        cfg.motion_band_frac = band;
        cfg.smooth_window = window;
        cfg.motion_rule = rule == "both" ? MotionRule::BothAxes : MotionRule::EitherAxis;
        try {
            cfg.validate();
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

Eye eye_from_dir(const fs::path& dir, const std::string& flag) {
    if (!flag.empty()) return parse_eye(flag);
    const fs::path meta = dir / "meta.json";
    if (fs::exists(meta)) {
        std::ifstream in(meta);
        try {
            const auto j = nlohmann::json::parse(in);
            if (j.contains("eye")) return parse_eye(j["eye"].get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(meta.string() + ": " + e.what());
        }
    }
    return Eye::Right;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    fs::path out;
    int cases = 0;
    double rapd_fraction = 0.5;
    double severity_min = 0.2;
    double severity_max = 0.5;
    std::uint64_t seed = 1;
    double noise = 0.0;
    double fps = CaseOptions{}.frame_rate;
    int width = CaseOptions{}.frame_w;
    int height = CaseOptions{}.frame_h;
    double jitter = CaseOptions{}.center_jitter;
    bool glint = false;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    if (a.cases < 1) throw UsageError("--cases must be at least 1");
    if (!(a.rapd_fraction >= 0.0 && a.rapd_fraction <= 1.0)) throw UsageError("--rapd-fraction must lie in [0, 1]");
    if (!(a.severity_min >= 0.0 && a.severity_min <= a.severity_max && a.severity_max < 1.0))
        throw UsageError("severities must satisfy 0 <= min <= max < 1");

    const int positives = static_cast<int>(std::lround(a.cases * a.rapd_fraction));
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> severity(a.severity_min, a.severity_max);
    std::vector<bool> labels(static_cast<std::size_t>(a.cases), false);
    std::fill(labels.begin(), labels.begin() + positives, true);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<double> severities;
    for (int i = 0; i < a.cases; ++i) severities.push_back(labels[static_cast<std::size_t>(i)] ? severity(rng) : 1.0);

    fs::create_directories(a.out);
    std::vector<CaseManifest> manifest(static_cast<std::size_t>(a.cases));
    const int digits = std::max(3, static_cast<int>(std::to_string(a.cases - 1).size()));
    parallel_for(a.cases, [&](int i) {
        CaseOptions opts;
        std::ostringstream id;
        id << "case_" << std::setw(digits) << std::setfill('0') << i;
        opts.case_id = id.str();
        opts.frame_w = a.width;
        opts.frame_h = a.height;
        opts.frame_rate = a.fps;
        opts.noise_sigma = a.noise;
        opts.center_jitter = a.jitter;
        opts.glint = a.glint;
        const auto idx = static_cast<std::size_t>(i);
        manifest[idx] = generate_case(labels[idx], severities[idx], a.seed * 1000003ULL + idx, a.out, opts);
    });
    const fs::path path = a.out / "manifest.csv";
    write_case_manifest(manifest, path);
    out << path.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
    fs::path frames;
    fs::path out;
    std::string eye;
    bool crop = false;
    fs::path dump_features;
    fs::path dump_accumulator;
    DetectorFlags detector;
};

int cmd_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
    const DetectorConfig cfg = a.detector.build();
    const FrameSequence seq = load_sequence(a.frames, eye_from_dir(a.frames, a.eye));
    const int n = static_cast<int>(seq.frames.size());
    const bool want_acc = !a.dump_accumulator.empty();
    std::vector<FrameDetection> results(seq.frames.size());
    std::mutex progress_mutex;
    int done = 0;
    parallel_for(n, [&](int i) {
        results[static_cast<std::size_t>(i)] = detect_frame(seq.frames[static_cast<std::size_t>(i)], a.crop, cfg, want_acc);
        std::lock_guard lock(progress_mutex);
        ++done;
        if (done % 100 == 0 || done == n) err << "detect: " << done << '/' << n << " frames\n";
    });

    PupilTrace trace;
    trace.eye = seq.eye;
    trace.frame_rate = seq.frame_rate;
    for (int i = 0; i < n; ++i) trace.samples.push_back(to_sample(results[static_cast<std::size_t>(i)], i));
    if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
    write_trace_csv(trace, a.out);

    if (!a.dump_features.empty()) {
        std::ostringstream csv;
        csv << "frame_index,x,y,gradient,ray_angle\n";
        for (int i = 0; i < n; ++i) {
            for (const auto& f : results[static_cast<std::size_t>(i)].center.features)
                csv << i << ',' << format_double(f.x) << ',' << format_double(f.y) << ',' << f.gradient << ','
                    << format_double(f.ray_angle) << '\n';
        }
        write_text(a.dump_features, csv.str());
    }
    if (want_acc) {
        fs::create_directories(a.dump_accumulator);
        for (int i = 0; i < n; ++i) {
            const auto& d = results[static_cast<std::size_t>(i)];
            if (d.circle) save_frame(d.accumulator.to_frame(), a.dump_accumulator / frame_file_name(i));
        }
    }
    out << trace.valid_count() << '/' << n << " frames measured, trace written to " << a.out.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------- assess

struct AssessArgs {
    fs::path right;
    fs::path left;
    std::string config = "crop-motion-smooth-plcc";
    std::optional<double> threshold;
    TraceFlags trace;
};

int cmd_assess(const AssessArgs& a, std::ostream& out) {
    PipelineConfig cfg;
    try {
        cfg = PipelineConfig::parse(a.config);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    const TraceConfig tc = a.trace.build();
    const PupilTrace right = read_trace_csv(a.right, Eye::Right);
    const PupilTrace left = read_trace_csv(a.left, Eye::Left);
    out << assessment_json(assess(right, left, cfg, a.threshold, tc)) << '\n';
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    fs::path data;
    fs::path manifest;
    fs::path out;
    std::string configs = "all";
    bool svg = false;
    std::string f_variant = "standard";
    std::string criterion = "youden";
    DetectorFlags detector;
    TraceFlags trace;
};

struct CaseTraces {
    ModeTraces right;
    ModeTraces left;
    std::string error;  // non-empty when frames could not be loaded
};

std::string summary_text(const std::vector<std::pair<PipelineConfig, EvalReport>>& rows) {
    std::ostringstream s;
    s << std::left << std::setw(30) << "config" << std::setw(6) << "crop" << std::setw(8) << "motion"
      << std::setw(8) << "smooth" << std::setw(6) << "kind" << std::right;
    for (const char* h : {"sens", "spec", "prec", "AUC", "F0.5", "F1", "F2", "thresh"}) s << std::setw(9) << h;
    s << '\n';
    s << std::fixed << std::setprecision(3);
    for (const auto& [cfg, r] : rows) {
        s << std::left << std::setw(30) << cfg.id() << std::setw(6) << (cfg.crop ? "yes" : "no") << std::setw(8)
          << (cfg.motion ? "yes" : "no") << std::setw(8) << (cfg.smoothing ? "yes" : "no") << std::setw(6)
          << kind_name(cfg.kind) << std::right;
        for (const double v : {r.sensitivity, r.specificity, r.precision, r.auc, r.f_scores.at(0.5),
                               r.f_scores.at(1.0), r.f_scores.at(2.0), r.operating_threshold})
            s << std::setw(9) << v;
        s << '\n';
    }
    return s.str();
}

std::string summary_csv(const std::vector<std::pair<PipelineConfig, EvalReport>>& rows) {
    std::ostringstream s;
    s << "config,crop,motion,smoothing,kind,sensitivity,specificity,precision,auc,f0.5,f1,f2,threshold,tp,tn,fp,fn\n";
    for (const auto& [cfg, r] : rows) {
        s << cfg.id() << ',' << cfg.crop << ',' << cfg.motion << ',' << cfg.smoothing << ',' << kind_name(cfg.kind);
        for (const double v : {r.sensitivity, r.specificity, r.precision, r.auc, r.f_scores.at(0.5),
                               r.f_scores.at(1.0), r.f_scores.at(2.0), r.operating_threshold})
            s << ',' << format_double(v);
        s << ',' << r.counts.tp << ',' << r.counts.tn << ',' << r.counts.fp << ',' << r.counts.fn << '\n';
    }
    return s.str();
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<PipelineConfig> configs;
    try {
        if (a.configs == "all") {
            configs = PipelineConfig::all();
        } else {
            for (const auto& id : split_list(a.configs)) configs.push_back(PipelineConfig::parse(id));
        }
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    if (configs.empty()) throw UsageError("no configurations selected");
    EvalOptions opts;
    opts.f_variant = a.f_variant == "table2" ? FVariant::Table2 : FVariant::Standard;
    opts.criterion = a.criterion == "maxmin" ? OperatingCriterion::MaxMin : OperatingCriterion::Youden;
    const DetectorConfig det = a.detector.build();
    const TraceConfig tc = a.trace.build();

    const fs::path manifest_path = a.manifest.empty() ? a.data / "manifest.csv" : a.manifest;
    const std::vector<CaseManifest> cases = read_case_manifest(manifest_path);
    const bool any_pos = std::any_of(cases.begin(), cases.end(), [](const CaseManifest& c) { return c.label; });
    const bool any_neg = std::any_of(cases.begin(), cases.end(), [](const CaseManifest& c) { return !c.label; });
    if (!any_pos || !any_neg) throw SingleClass(manifest_path.string() + " holds a single class");

    // Measurement is the expensive part and does not depend on the
    // post-processing switches, so each case is measured once per eye.
    std::vector<CaseTraces> traces(cases.size());
    std::mutex log_mutex;
    int done = 0;
    parallel_for(static_cast<int>(cases.size()), [&](int i) {
        const CaseManifest& c = cases[static_cast<std::size_t>(i)];
        CaseTraces& t = traces[static_cast<std::size_t>(i)];
        try {
            t.right = detect_sequence_both(load_sequence(c.right_dir, Eye::Right), det, 1);
            t.left = detect_sequence_both(load_sequence(c.left_dir, Eye::Left), det, 1);
        } catch (const Error& e) {
            t.error = e.what();
        }
        std::lock_guard lock(log_mutex);
        ++done;
        err << "evaluate: measured " << c.case_id << " (" << done << '/' << cases.size() << ")\n";
    });

    fs::create_directories(a.out);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (!traces[i].error.empty()) continue;
        const fs::path dir = a.out / "traces" / cases[i].case_id;
        fs::create_directories(dir);
        write_trace_csv(traces[i].right.cropped, dir / "right_crop.csv");
        write_trace_csv(traces[i].left.cropped, dir / "left_crop.csv");
        write_trace_csv(traces[i].right.full, dir / "right_full.csv");
        write_trace_csv(traces[i].left.full, dir / "left_full.csv");
    }

    std::vector<std::pair<PipelineConfig, EvalReport>> rows;
    std::vector<NamedCurve> curves;
    for (const auto& cfg : configs) {
        std::vector<ManifestRow> scores;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const CaseManifest& c = cases[i];
            ManifestRow row{c.case_id, 0.0, c.label};
            try {
                if (!traces[i].error.empty()) throw IoError(traces[i].error);
                const PupilTrace& r = cfg.crop ? traces[i].right.cropped : traces[i].right.full;
                const PupilTrace& l = cfg.crop ? traces[i].left.cropped : traces[i].left.full;
                row.score = assess(r, l, cfg, std::nullopt, tc).index;
            } catch (const Error& e) {
                // Outside [0, 1] on the wrong side: a failed case counts against the config.
                row.score = c.label ? -1.0 : 2.0;
                err << "evaluate: " << cfg.id() << ' ' << c.case_id << " failed: " << e.what() << '\n';
            }
            scores.push_back(row);
        }
        EvalReport report = evaluate_manifest(scores, cfg.id(), opts);
        const fs::path dir = a.out / cfg.id();
        fs::create_directories(dir);
        write_score_manifest(scores, dir / "scores.csv");
        write_roc_csv(report.roc, dir / "roc.csv");
        write_text(dir / "report.json", report_json(report) + "\n");
        if (a.svg) write_text(dir / "scatter.svg", scatter_svg(scores, report.operating_threshold, cfg.id()));
        curves.push_back({cfg.id(), report.roc});
        rows.emplace_back(cfg, std::move(report));
    }
    if (a.svg) write_text(a.out / "roc.svg", roc_svg(curves));
    const std::string text = summary_text(rows);
    write_text(a.out / "summary.txt", text);
    write_text(a.out / "summary.csv", summary_csv(rows));
    out << text;
    return 0;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
    fs::path data;
    fs::path out;
    std::string canny = "10,15,20,25,30,40";
    std::string acc_threshold = "10,20,30,50";
    std::string acc_bin = "1,2";
    bool full = false;
    int frames_per_eye = 10;
    std::uint64_t seed = 1;
};

struct Fixture {
    Frame frame;
    double truth = 0.0;
};

std::vector<Fixture> load_fixtures(const fs::path& data, int frames_per_eye, std::uint64_t seed) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::recursive_directory_iterator(data)) {
        if (entry.is_regular_file() && entry.path().filename() == "meta.json") dirs.push_back(entry.path().parent_path());
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw IoError("no frame directories under " + data.string());

    std::mt19937_64 rng(seed);
    std::vector<Fixture> out;
    for (const auto& dir : dirs) {
        const fs::path truth_path = dir / "truth.csv";
        if (!fs::exists(truth_path)) throw IoError("missing " + truth_path.string());
        const PupilTrace truth = read_trace_csv(truth_path);
        const FrameSequence seq = load_sequence(dir, Eye::Right);
        std::vector<std::size_t> picks(seq.frames.size());
        std::iota(picks.begin(), picks.end(), std::size_t{0});
        std::shuffle(picks.begin(), picks.end(), rng);
        if (frames_per_eye > 0 && picks.size() > static_cast<std::size_t>(frames_per_eye))
            picks.resize(static_cast<std::size_t>(frames_per_eye));
        std::sort(picks.begin(), picks.end());
        for (const std::size_t i : picks) {
            const auto it = std::find_if(truth.samples.begin(), truth.samples.end(),
                                         [&](const PupilSample& s) { return s.frame_index == static_cast<int>(i); });
            if (it == truth.samples.end() || !it->valid) continue;
            out.push_back({seq.frames[i], it->radius});
        }
    }
    if (out.empty()) throw IoError("no usable truth rows under " + data.string());
    return out;
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
    const auto cannys = parse_list<double>(a.canny, "canny", parse_double);
    const auto thresholds = parse_list<int>(a.acc_threshold, "accumulator threshold", parse_int);
    const auto bins = parse_list<int>(a.acc_bin, "accumulator bin", parse_int);
    for (const double c : cannys) if (c < 0.0) throw UsageError("canny thresholds must be non-negative");
    for (const int t : thresholds) if (t < 1) throw UsageError("accumulator thresholds must be >= 1");
    for (const int b : bins) if (b < 1) throw UsageError("accumulator bins must be >= 1");

    const std::vector<Fixture> fixtures = load_fixtures(a.data, a.frames_per_eye, a.seed);
    StarburstConfig sb;
    std::vector<std::optional<Point>> hints(fixtures.size());
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const auto est = locate_pupil(fixtures[i].frame, sb);
        if (est.valid) hints[i] = Point{est.x, est.y};
    }

    struct Row {
        double canny;
        int threshold;
        int bin;
        double mean_error;
        int failures;
    };
    std::vector<Row> rows;
    // The accumulator threshold only accepts or rejects the peak, so each
    // (canny, bin) pair is detected once with the lowest possible threshold.
    for (const double canny : cannys) {
        for (const int bin : bins) {
            HoughConfig hc;
            hc.canny_threshold = canny;
            hc.accumulator_bin = bin;
            hc.accumulator_threshold = 1;
            std::vector<std::optional<CircleMeasure>> found(fixtures.size());
            parallel_for(static_cast<int>(fixtures.size()), [&](int i) {
                const auto idx = static_cast<std::size_t>(i);
                if (!a.full && !hints[idx]) return;
                try {
                    found[idx] = measure_pupil(fixtures[idx].frame, hints[idx], hc, !a.full);
                } catch (const NoCircle&) {
                }
            });
            for (const int t : thresholds) {
                double total = 0.0;
                int failures = 0;
                for (std::size_t i = 0; i < fixtures.size(); ++i) {
                    if (found[i] && found[i]->votes >= t) {
                        total += std::fabs(found[i]->radius - fixtures[i].truth);
                    } else {
                        // A missed pupil is as wrong as reporting radius zero.
                        total += fixtures[i].truth;
                        ++failures;
                    }
                }
                rows.push_back({canny, t, bin, total / static_cast<double>(fixtures.size()), failures});
            }
        }
    }
    const Row best = *std::min_element(rows.begin(), rows.end(),
                                       [](const Row& x, const Row& y) { return x.mean_error < y.mean_error; });

    nlohmann::ordered_json j;
    auto row_json = [](const Row& r) {
        return nlohmann::ordered_json{{"canny_threshold", r.canny},
                                      {"accumulator_threshold", r.threshold},
                                      {"accumulator_bin", r.bin},
                                      {"mean_abs_radius_error", r.mean_error},
                                      {"failures", r.failures}};
    };
    j["frames"] = fixtures.size();
    j["mode"] = a.full ? "full" : "crop";
    j["best"] = row_json(best);
    j["grid"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) j["grid"].push_back(row_json(r));
    const fs::path path = a.out.empty() ? a.data / "calibration.json" : a.out;
    write_text(path, j.dump(2) + "\n");

    out << "best: canny_threshold=" << format_double(best.canny) << " accumulator_threshold=" << best.threshold
        << " accumulator_bin=" << best.bin << " mean_abs_radius_error=" << format_double(best.mean_error)
        << " failures=" << best.failures << '/' << fixtures.size() << '\n';
    out << path.string() << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Swinging-light RAPD screening: synthesis, pupil detection, assessment and evaluation", "plrtest"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "generate labeled synthetic right/left frame sequences");
    s->add_option("--out", synth.out, "output directory")->required();
    s->add_option("--cases", synth.cases, "number of cases")->required();
    s->add_option("--rapd-fraction", synth.rapd_fraction, "fraction of RAPD-positive cases")->capture_default_str();
    s->add_option("--severity-min", synth.severity_min, "lowest rapd_factor of positive cases")->capture_default_str();
    s->add_option("--severity-max", synth.severity_max, "highest rapd_factor of positive cases")->capture_default_str();
    s->add_option("--seed", synth.seed, "master seed")->capture_default_str();
    s->add_option("--noise", synth.noise, "Gaussian noise sigma (intensity)")->capture_default_str();
    s->add_option("--fps", synth.fps, "frame rate")->capture_default_str();
    s->add_option("--width", synth.width, "frame width")->capture_default_str();
    s->add_option("--height", synth.height, "frame height")->capture_default_str();
    s->add_option("--jitter", synth.jitter, "max pupil centre offset from the frame centre")->capture_default_str();
    s->add_flag("--glint", synth.glint, "draw a corneal glint");
    s->footer("Writes <out>/<case_id>/{right,left}/frame_NNNNN.pgm, meta.json, truth.csv and\n"
                "<out>/manifest.csv (case_id,label,severity,affected_eye).");

    DetectArgs detect;
    auto* d = app.add_subcommand("detect", "measure the pupil in every frame of a sequence");
    d->add_option("--frames", detect.frames, "directory of frame_NNNNN.pgm files")->required();
    d->add_option("--out", detect.out, "trace CSV to write")->required();
    d->add_option("--eye", detect.eye, "left|right (default: meta.json, else right)");
    d->add_flag("--crop", detect.crop, "size the pupil on the quarter crop around the Starburst centre");
    d->add_option("--dump-features", detect.dump_features, "CSV of every Starburst feature point");
    d->add_option("--dump-accumulator", detect.dump_accumulator, "directory for vote-plane PGMs at the winning radius");
    detect.detector.add(*d);
    d->footer("Trace CSV columns: frame_index,cx,cy,radius,valid. Failed frames are written with valid=0.");

    AssessArgs assess_args;
    auto* as = app.add_subcommand("assess", "RAPD index of a right/left trace pair, printed as JSON");
    as->add_option("--right", assess_args.right, "right-eye trace CSV")->required();
    as->add_option("--left", assess_args.left, "left-eye trace CSV")->required();
    as->add_option("--config", assess_args.config,
                   "[no]crop-[no]motion-[no]smooth-{srcc,plcc}")->capture_default_str();
    as->add_option("--threshold", assess_args.threshold, "classify positive when the index exceeds this");
    assess_args.trace.add(*as);
    as->footer("Output: {\"index\",\"kind\",\"crop\",\"motion\",\"smoothing\",\"positive\",\"threshold\",\"samples\"}.");

    EvaluateArgs eval;
    auto* e = app.add_subcommand("evaluate", "detect, assess and score every case for each configuration");
    e->add_option("--data", eval.data, "dataset directory written by synth")->required();
    e->add_option("--manifest", eval.manifest, "case manifest (default <data>/manifest.csv)");
    e->add_option("--out", eval.out, "report directory")->required();
    e->add_option("--configs", eval.configs, "all, or comma-separated configuration ids")->capture_default_str();
    e->add_flag("--svg", eval.svg, "also write ROC and index scatter plots");
    e->add_option("--f-variant", eval.f_variant, "standard, or table2 for the published-table formula")
        ->check(CLI::IsMember({"standard", "table2"}))
        ->capture_default_str();
    e->add_option("--criterion", eval.criterion, "operating point: youden or maxmin")
        ->check(CLI::IsMember({"youden", "maxmin"}))
        ->capture_default_str();
    eval.detector.add(*e);
    eval.trace.add(*e);
    e->footer("Writes <out>/<config>/{report.json,roc.csv,scores.csv}, <out>/summary.{txt,csv},\n"
                "and per-case traces under <out>/traces/.");

    CalibrateArgs cal;
    auto* c = app.add_subcommand("calibrate", "grid-search Hough parameters against truth.csv radii");
    c->add_option("--data", cal.data, "directory searched recursively for frame folders with truth.csv")->required();
    c->add_option("--out", cal.out, "calibration JSON (default <data>/calibration.json)");
    c->add_option("--canny", cal.canny, "comma-separated canny thresholds")->capture_default_str();
    c->add_option("--accumulator-threshold", cal.acc_threshold, "comma-separated vote thresholds")->capture_default_str();
    c->add_option("--accumulator-bin", cal.acc_bin, "comma-separated accumulator bins")->capture_default_str();
    c->add_flag("--full", cal.full, "measure on the full frame instead of the quarter crop");
    c->add_option("--frames-per-eye", cal.frames_per_eye, "frames sampled per sequence, 0 for all")->capture_default_str();
    c->add_option("--seed", cal.seed, "frame sampling seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& pe) {
        const int code = app.exit(pe, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*s) return cmd_synth(synth, out);
        if (*d) return cmd_detect(detect, out, err);
        if (*as) return cmd_assess(assess_args, out);
        if (*e) return cmd_evaluate(eval, out, err);
        if (*c) return cmd_calibrate(cal, out);
    } catch (const UsageError& ue) {
        err << "error: " << ue.what() << '\n';
        return 2;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& ex) {
        err << "error: " << ex.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace plrtest
