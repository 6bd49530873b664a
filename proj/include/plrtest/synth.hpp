#pragma once

#include "plrtest/frame.hpp"
#include "plrtest/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace plrtest {

/// Which eye a stimulus segment illuminates.
enum class Illumination { None, Left, Right };

struct StimulusSegment {
    Illumination light = Illumination::None;
    double duration = 1.0;  ///< seconds
};

struct StimulusSchedule {
    std::vector<StimulusSegment> segments;
    double frame_rate = 30.0;

    void validate() const;
    double total_duration() const;
    int total_frames() const;
    /// Light state at time t (seconds); None before 0 and after the end.
    Illumination at(double t) const;

    /// `dark` seconds without light, then `swings` alternating illuminations of
    /// `segment` seconds each, starting with `first`.
    static StimulusSchedule swinging(double frame_rate, Eye first = Eye::Right,
                                     double dark = 2.0, int swings = 6, double segment = 3.0);
};

/// First-order pupil dynamics driven by the stimulus schedule.
struct PlrParams {
    double r_base = 45.0;        ///< dilated radius, pixels
    double amplitude = 20.0;     ///< full constriction, pixels
    double tau_constrict = 0.4;  ///< seconds
    double tau_dilate = 1.2;     ///< seconds
    double latency = 0.2;        ///< seconds
    double rapd_factor = 1.0;    ///< 1 = healthy; scales constriction while the affected eye is lit
    Eye affected_eye = Eye::Left;
    /// Response lag of the affected eye's pupil at rapd_factor 0, in seconds;
    /// the applied lag is (1 - rapd_factor) * asymmetry_lag, interpolated between frames.
    double asymmetry_lag = 0.6;

    void validate() const;
};

/// Radius series, one sample per frame of `schedule`.
std::vector<double> plr_trace(const PlrParams& params, const StimulusSchedule& schedule, Eye eye);

struct Glint {
    Point offset;  ///< relative to the pupil centre
    double radius = 4.0;
};

struct RenderParams {
    int frame_w = 256;
    int frame_h = 192;
    Point pupil_center{128.0, 96.0};
    std::uint8_t sclera = 200;
    std::uint8_t iris = 100;
    std::uint8_t pupil = 30;
    std::uint8_t glint_level = 250;
    double iris_radius = 180.0;  ///< close-up eye camera: the limbus lies outside the default frame
    std::optional<Glint> glint;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Sets every pixel whose centre lies within `radius` of `center` to `value`.
void paint_disc(Frame& frame, Point center, double radius, std::uint8_t value);
/// Adds seeded zero-mean Gaussian noise, clamped to [0, 255]. sigma == 0 is a no-op.
void add_gaussian_noise(Frame& frame, double sigma, std::uint64_t seed);

/// Sclera field, iris disc and pupil disc with hard edges, optional glint, then noise.
/// Throws GeometryError when radius >= iris_radius.
Frame render_frame(double radius, const RenderParams& rp);

struct CaseOptions {
    std::string case_id;  ///< empty: "case_<seed>"
    int frame_w = 256;
    int frame_h = 192;
    double frame_rate = 10.0;
    double noise_sigma = 0.0;
    double center_jitter = 8.0;  ///< max |offset| of the pupil centre from the frame centre
    bool glint = false;
    PlrParams plr;  ///< rapd_factor and affected_eye are overwritten per case
};

struct CaseManifest {
    std::string case_id;
    bool label = false;
    double severity = 1.0;
    Eye affected_eye = Eye::Left;
    std::filesystem::path right_dir;
    std::filesystem::path left_dir;
};

/// Writes `<out>/<case_id>/{right,left}/` (frames, meta.json, truth.csv).
/// `severity` is used as the rapd_factor of positive cases and must be < 1 for them.
CaseManifest generate_case(bool label, double severity, std::uint64_t seed,
                           const std::filesystem::path& out_dir, const CaseOptions& opts = {});

/// Ground-truth traces exactly as generate_case would write them, without I/O.
struct CaseTruth {
    PupilTrace right;
    PupilTrace left;
    Eye affected_eye = Eye::Left;
};
CaseTruth case_truth(bool label, double severity, std::uint64_t seed, const CaseOptions& opts = {});

/// `case_id,label,severity,affected_eye` rows.
void write_case_manifest(const std::vector<CaseManifest>& cases, const std::filesystem::path& path);
std::vector<CaseManifest> read_case_manifest(const std::filesystem::path& path);

}  // namespace plrtest
