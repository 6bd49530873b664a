#include "plrtest/frame.hpp"

#include "plrtest/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace plrtest {

std::string_view eye_name(Eye eye) {
    return eye == Eye::Left ? "left" : "right";
}

Eye parse_eye(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "left") return Eye::Left;
    if (lower == "right") return Eye::Right;
    throw ConfigError("unknown eye '" + std::string(text) + "' (expected left|right)");
}

Frame::Frame(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw ConfigError("frame dimensions must be positive");
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) throw ConfigError("frame dimensions must be positive");
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ConfigError("pixel buffer size does not match frame dimensions");
}

void FrameSequence::validate() const {
    if (!(frame_rate > 0.0)) throw ConfigError("frame rate must be positive");
    if (frames.empty()) return;
    const int w = frames.front().width();
    const int h = frames.front().height();
    for (const auto& f : frames) {
        if (f.width() != w || f.height() != h)
            throw FormatError("sequence frames have mixed dimensions");
    }
}

namespace {

// Header tokenizer for the netpbm family: whitespace separated, '#' comments.
class PgmHeaderReader {
public:
    explicit PgmHeaderReader(std::string_view bytes) : bytes_(bytes) {}

    std::string_view token() {
        skip_space_and_comments();
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            ++pos_;
        if (start == pos_) throw FormatError("PGM header truncated");
        return bytes_.substr(start, pos_ - start);
    }

    int number() {
        const auto tok = token();
        int value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw FormatError("PGM header field is not an integer");
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw FormatError("PGM header truncated");
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return std::move(buf).str();
}

}  // namespace

Frame parse_pgm(std::string_view bytes) {
    PgmHeaderReader reader(bytes);
    if (reader.token() != "P5") throw FormatError("not a binary PGM (P5) image");
    const int width = reader.number();
    const int height = reader.number();
    const int maxval = reader.number();
    if (width <= 0 || height <= 0) throw FormatError("PGM dimensions must be positive");
    if (maxval != 255) throw FormatError("PGM maxval must be 255");
    const std::size_t offset = reader.raster_offset();
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < offset + count) throw FormatError("PGM pixel payload truncated");
    const auto* data = reinterpret_cast<const std::uint8_t*>(bytes.data() + offset);
    return Frame(width, height, std::vector<std::uint8_t>(data, data + count));
}

Frame load_frame(const fs::path& path) {
    const std::string bytes = read_file(path);
    try {
        return parse_pgm(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string encode_pgm(const Frame& frame) {
    std::string out = "P5\n" + std::to_string(frame.width()) + " " +
                      std::to_string(frame.height()) + "\n255\n";
    const auto px = frame.pixels();
    out.append(reinterpret_cast<const char*>(px.data()), px.size());
    return out;
}

void save_frame(const Frame& frame, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const std::string bytes = encode_pgm(frame);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

std::string frame_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%05d.pgm", index);
    return buf;
}

FrameSequence load_sequence(const fs::path& dir, Eye eye) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());

    std::map<int, fs::path> indexed;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() != 15 || name.rfind("frame_", 0) != 0 || name.substr(11) != ".pgm")
            continue;
        int index = 0;
        const char* first = name.data() + 6;
        auto [ptr, perr] = std::from_chars(first, first + 5, index);
        if (perr != std::errc{} || ptr != first + 5) continue;
        indexed.emplace(index, entry.path());
    }
    if (indexed.empty()) throw IoError("no frame_NNNNN.pgm files in " + dir.string());

    FrameSequence seq;
    seq.eye = eye;
    int expected = 0;
    for (const auto& [index, path] : indexed) {
        if (index != expected)
            throw GapError("missing " + frame_file_name(expected) + " in " + dir.string());
        seq.frames.push_back(load_frame(path));
        ++expected;
    }

    const fs::path meta = dir / "meta.json";
    if (fs::exists(meta)) {
        try {
            const auto j = nlohmann::json::parse(read_file(meta));
            if (j.contains("frame_rate")) seq.frame_rate = j.at("frame_rate").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(meta.string() + ": " + e.what());
        }
    }
    seq.validate();
    return seq;
}

void save_sequence(const FrameSequence& sequence, const fs::path& dir) {
    sequence.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (std::size_t i = 0; i < sequence.frames.size(); ++i)
        save_frame(sequence.frames[i], dir / frame_file_name(static_cast<int>(i)));

    nlohmann::json meta = {{"frame_rate", sequence.frame_rate},
                           {"eye", std::string(eye_name(sequence.eye))}};
    std::ofstream out(dir / "meta.json");
    if (!out) throw IoError("cannot write meta.json in " + dir.string());
    out << meta.dump(2) << '\n';
}

CroppedFrame quarter_crop(const Frame& frame, Point center) {
    const int w = (frame.width() + 1) / 2;
    const int h = (frame.height() + 1) / 2;
    const int cx = static_cast<int>(std::floor(center.x + 0.5));
    const int cy = static_cast<int>(std::floor(center.y + 0.5));
    const int ox = std::clamp(cx - w / 2, 0, frame.width() - w);
    const int oy = std::clamp(cy - h / 2, 0, frame.height() - h);

    Frame sub(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) sub.set(x, y, frame.at(ox + x, oy + y));
    }
    return {std::move(sub), CropWindow{ox, oy, w, h}};
}

}  // namespace plrtest
