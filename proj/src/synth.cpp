#include "plrtest/synth.hpp"

#include "plrtest/error.hpp"
#include "plrtest/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace fs = std::filesystem;

namespace plrtest {

void StimulusSchedule::validate() const {
    if (!(frame_rate > 0.0)) throw ConfigError("schedule frame rate must be positive");
    if (segments.empty()) throw ConfigError("schedule has no segments");
    for (const auto& s : segments) {
        if (!(s.duration > 0.0)) throw ConfigError("schedule segment durations must be positive");
    }
    if (total_frames() < 30) throw ConfigError("schedule must span at least 30 frames");
}

double StimulusSchedule::total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

int StimulusSchedule::total_frames() const {
    return static_cast<int>(std::lround(total_duration() * frame_rate));
}

Illumination StimulusSchedule::at(double t) const {
    if (t < 0.0) return Illumination::None;
    double start = 0.0;
    for (const auto& s : segments) {
        if (t < start + s.duration) return s.light;
        start += s.duration;
    }
    return Illumination::None;
}

StimulusSchedule StimulusSchedule::swinging(double frame_rate, Eye first, double dark, int swings,
                                            double segment) {
    StimulusSchedule sched;
    sched.frame_rate = frame_rate;
    if (dark > 0.0) sched.segments.push_back({Illumination::None, dark});
    Illumination light = first == Eye::Right ? Illumination::Right : Illumination::Left;
    for (int i = 0; i < swings; ++i) {
        sched.segments.push_back({light, segment});
        light = light == Illumination::Right ? Illumination::Left : Illumination::Right;
    }
    return sched;
}

void PlrParams::validate() const {
    if (!(amplitude > 0.0 && amplitude < r_base))
        throw ConfigError("plr: amplitude must lie in (0, r_base)");
    if (!(tau_constrict > 0.0 && tau_dilate > 0.0)) throw ConfigError("plr: time constants must be positive");
    if (latency < 0.0) throw ConfigError("plr: latency must be non-negative");
    if (!(rapd_factor >= 0.0 && rapd_factor <= 1.0)) throw ConfigError("plr: rapd_factor must lie in [0, 1]");
    if (asymmetry_lag < 0.0) throw ConfigError("plr: asymmetry_lag must be non-negative");
}

namespace {

Illumination illumination_of(Eye eye) {
    return eye == Eye::Left ? Illumination::Left : Illumination::Right;
}

}  // namespace

std::vector<double> plr_trace(const PlrParams& params, const StimulusSchedule& schedule, Eye eye) {
    params.validate();
    schedule.validate();
    const int n = schedule.total_frames();
    const double dt = 1.0 / schedule.frame_rate;
    const Illumination affected = illumination_of(params.affected_eye);

    // Consensual drive: both pupils follow the same relaxation.
    std::vector<double> r(static_cast<std::size_t>(n));
    double radius = params.r_base;
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            const Illumination light = schedule.at(i * dt - params.latency);
            double depth = 0.0;
            if (light != Illumination::None)
                depth = params.amplitude * (light == affected ? params.rapd_factor : 1.0);
            const double target = params.r_base - depth;
            const double tau = target < radius ? params.tau_constrict : params.tau_dilate;
            radius += std::min(1.0, dt / tau) * (target - radius);
        }
        r[static_cast<std::size_t>(i)] = radius;
    }

    if (eye != params.affected_eye) return r;
    // The affected pupil trails the consensual response; fractional lags
    // interpolate between frames so the delay grows smoothly with the defect.
    const double lag = (1.0 - params.rapd_factor) * params.asymmetry_lag * schedule.frame_rate;
    if (lag == 0.0) return r;
    std::vector<double> lagged(r.size());
    for (int i = 0; i < n; ++i) {
        const double t = std::max(0.0, i - lag);
        const auto k = static_cast<std::size_t>(t);
        const double w = t - static_cast<double>(k);
        lagged[static_cast<std::size_t>(i)] =
            k + 1 < r.size() ? (1.0 - w) * r[k] + w * r[k + 1] : r[k];
    }
    return lagged;
}

void RenderParams::validate() const {
    if (frame_w <= 0 || frame_h <= 0) throw ConfigError("render: frame size must be positive");
    if (!(pupil < iris && iris < sclera))
        throw ConfigError("render: intensities must satisfy pupil < iris < sclera");
    if (noise_sigma < 0.0) throw ConfigError("render: noise_sigma must be non-negative");
}

void paint_disc(Frame& frame, Point center, double radius, std::uint8_t value) {
    const double r2 = radius * radius;
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius)));
    const int y1 = std::min(frame.height() - 1, static_cast<int>(std::ceil(center.y + radius)));
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius)));
    const int x1 = std::min(frame.width() - 1, static_cast<int>(std::ceil(center.x + radius)));
    for (int y = y0; y <= y1; ++y) {
        const double dy = y - center.y;
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - center.x;
            if (dx * dx + dy * dy <= r2) frame.set(x, y, value);
        }
    }
}

void add_gaussian_noise(Frame& frame, double sigma, std::uint64_t seed) {
    if (sigma <= 0.0) return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& p : frame.pixels()) {
        const double v = std::round(p + noise(rng));
        p = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
}

Frame render_frame(double radius, const RenderParams& rp) {
    rp.validate();
    if (!(radius > 0.0)) throw GeometryError("pupil radius must be positive");
    if (radius >= rp.iris_radius) throw GeometryError("pupil radius must be below the iris radius");

    Frame frame(rp.frame_w, rp.frame_h, rp.sclera);
    paint_disc(frame, rp.pupil_center, rp.iris_radius, rp.iris);
    paint_disc(frame, rp.pupil_center, radius, rp.pupil);
    if (rp.glint) {
        const Point c{rp.pupil_center.x + rp.glint->offset.x, rp.pupil_center.y + rp.glint->offset.y};
        paint_disc(frame, c, rp.glint->radius, rp.glint_level);
    }
    add_gaussian_noise(frame, rp.noise_sigma, rp.seed);
    return frame;
}

namespace {

// Independent, reproducible sub-seeds from one case seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct CaseLayout {
    std::string case_id;
    Eye affected = Eye::Left;
    Eye first_lit = Eye::Right;
    Point center_right;
    Point center_left;
    PlrParams plr;
    StimulusSchedule schedule;
};

CaseLayout plan_case(bool label, double severity, std::uint64_t seed, const CaseOptions& opts) {
    if (!(severity >= 0.0 && severity <= 1.0)) throw ConfigError("severity must lie in [0, 1]");
    if (label && !(severity < 1.0)) throw ConfigError("positive cases need severity < 1");

    CaseLayout L;
    L.case_id = opts.case_id.empty() ? "case_" + std::to_string(seed) : opts.case_id;

    std::mt19937_64 rng(derive_seed(seed, 0x5eed));
    std::uniform_real_distribution<double> jitter(-opts.center_jitter, opts.center_jitter);
    std::bernoulli_distribution coin(0.5);
    L.affected = coin(rng) ? Eye::Left : Eye::Right;
    L.first_lit = coin(rng) ? Eye::Left : Eye::Right;
    const Point mid{opts.frame_w / 2.0, opts.frame_h / 2.0};
    L.center_right = {mid.x + jitter(rng), mid.y + jitter(rng)};
    L.center_left = {mid.x + jitter(rng), mid.y + jitter(rng)};

    L.plr = opts.plr;
    L.plr.rapd_factor = label ? severity : 1.0;
    L.plr.affected_eye = L.affected;
    L.schedule = StimulusSchedule::swinging(opts.frame_rate, L.first_lit);
    return L;
}

PupilTrace truth_trace(const std::vector<double>& radii, Point center, Eye eye, double fps) {
    PupilTrace t;
    t.eye = eye;
    t.frame_rate = fps;
    for (std::size_t i = 0; i < radii.size(); ++i)
        t.samples.push_back({static_cast<int>(i), center.x, center.y, radii[i], true});
    return t;
}

}  // namespace

CaseTruth case_truth(bool label, double severity, std::uint64_t seed, const CaseOptions& opts) {
    const CaseLayout L = plan_case(label, severity, seed, opts);
    CaseTruth truth;
    truth.affected_eye = L.affected;
    truth.right = truth_trace(plr_trace(L.plr, L.schedule, Eye::Right), L.center_right, Eye::Right,
                              opts.frame_rate);
    truth.left = truth_trace(plr_trace(L.plr, L.schedule, Eye::Left), L.center_left, Eye::Left,
                             opts.frame_rate);
    return truth;
}

CaseManifest generate_case(bool label, double severity, std::uint64_t seed, const fs::path& out_dir,
                           const CaseOptions& opts) {
    const CaseLayout L = plan_case(label, severity, seed, opts);
    const CaseTruth truth = case_truth(label, severity, seed, opts);

    CaseManifest m;
    m.case_id = L.case_id;
    m.label = label;
    m.severity = label ? severity : 1.0;
    m.affected_eye = L.affected;
    m.right_dir = out_dir / L.case_id / "right";
    m.left_dir = out_dir / L.case_id / "left";

    for (const Eye eye : {Eye::Right, Eye::Left}) {
        const PupilTrace& t = eye == Eye::Right ? truth.right : truth.left;
        RenderParams rp;
        rp.frame_w = opts.frame_w;
        rp.frame_h = opts.frame_h;
        rp.pupil_center = eye == Eye::Right ? L.center_right : L.center_left;
        rp.noise_sigma = opts.noise_sigma;
        if (opts.glint) rp.glint = Glint{{-0.3 * L.plr.r_base, -0.3 * L.plr.r_base}, 4.0};

        FrameSequence seq;
        seq.eye = eye;
        seq.frame_rate = opts.frame_rate;
        seq.frames.reserve(t.samples.size());
        for (const auto& s : t.samples) {
            rp.seed = derive_seed(seed, eye == Eye::Right ? 1 : 2, static_cast<std::uint64_t>(s.frame_index));
            seq.frames.push_back(render_frame(s.radius, rp));
        }
        const fs::path dir = eye == Eye::Right ? m.right_dir : m.left_dir;
        save_sequence(seq, dir);
        write_trace_csv(t, dir / "truth.csv");
    }
    return m;
}

void write_case_manifest(const std::vector<CaseManifest>& cases, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "case_id,label,severity,affected_eye\n";
    for (const auto& c : cases) {
        out << c.case_id << ',' << (c.label ? 1 : 0) << ',' << format_double(c.severity) << ','
            << eye_name(c.affected_eye) << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<CaseManifest> read_case_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line).rfind("case_id,label", 0) != 0)
        throw FormatError(path.string() + ": expected header case_id,label,...");
    const fs::path root = path.parent_path();
    std::vector<CaseManifest> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 2) throw FormatError(path.string() + ": short manifest row");
        CaseManifest m;
        m.case_id = f[0];
        const int label = parse_int(f[1], "label");
        if (label != 0 && label != 1) throw FormatError(path.string() + ": label must be 0 or 1");
        m.label = label == 1;
        if (f.size() > 2) m.severity = parse_double(f[2], "severity");
        if (f.size() > 3) m.affected_eye = parse_eye(f[3]);
        m.right_dir = root / m.case_id / "right";
        m.left_dir = root / m.case_id / "left";
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace plrtest
