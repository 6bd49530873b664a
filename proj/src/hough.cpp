#include "plrtest/hough.hpp"

#include "plrtest/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace plrtest {

void HoughConfig::validate() const {
    if (!(r_min_frac > 0.0 && r_min_frac < 1.0))
        throw ConfigError("hough: r_min_frac must lie in (0, 1)");
    if (accumulator_bin < 1) throw ConfigError("hough: accumulator_bin must be >= 1");
    if (accumulator_threshold < 1) throw ConfigError("hough: accumulator_threshold must be >= 1");
    if (canny_threshold < 0.0) throw ConfigError("hough: canny_threshold must be >= 0");
    if (r_max_mode == RadiusMode::Explicit && !(r_max_explicit > 0.0))
        throw ConfigError("hough: explicit r_max must be positive");
}

std::size_t BinaryMap::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::vector<float> sobel_magnitude(const Frame& frame) {
    const int w = frame.width();
    const int h = frame.height();
    std::vector<float> mag(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0f);
    const auto px = frame.pixels();
    auto I = [&](int x, int y) { return static_cast<int>(px[static_cast<std::size_t>(y) * w + x]); };

    for (int y = 1; y + 1 < h; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
            const int gx = (I(x + 1, y - 1) + 2 * I(x + 1, y) + I(x + 1, y + 1)) -
                           (I(x - 1, y - 1) + 2 * I(x - 1, y) + I(x - 1, y + 1));
            const int gy = (I(x - 1, y + 1) + 2 * I(x, y + 1) + I(x + 1, y + 1)) -
                           (I(x - 1, y - 1) + 2 * I(x, y - 1) + I(x + 1, y - 1));
            mag[static_cast<std::size_t>(y) * w + x] =
                static_cast<float>(std::sqrt(static_cast<double>(gx * gx + gy * gy)) / 4.0);
        }
    }
    return mag;
}

BinaryMap edge_map(const Frame& frame, const HoughConfig& cfg) {
    BinaryMap map{frame.width(), frame.height(), {}};
    const auto mag = sobel_magnitude(frame);
    map.bits.resize(mag.size(), 0);
    for (std::size_t i = 0; i < mag.size(); ++i) {
        if (mag[i] > 0.0f && mag[i] >= cfg.canny_threshold) map.bits[i] = 1;
    }
    return map;
}

Frame AccumulatorSlice::to_frame() const {
    Frame out(width, height);
    const std::uint32_t peak =
        votes.empty() ? 0u : *std::max_element(votes.begin(), votes.end());
    if (peak == 0) return out;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const auto v = votes[static_cast<std::size_t>(y) * width + x];
            out.set(x, y, static_cast<std::uint8_t>((255ull * v) / peak));
        }
    }
    return out;
}

namespace {

// Ring of cells at cell distance in [rc - 0.5, rc + 0.5), stored as
// horizontal spans per row so voting can clip whole runs at the borders.
struct Span {
    int dy;
    int x_begin;  // inclusive
    int x_end;    // exclusive
};

struct Ring {
    std::vector<Span> spans;
    int extent = 0;
};

Ring make_ring(double rc) {
    Ring ring;
    const double lo = std::max(0.0, rc - 0.5);
    const double hi = rc + 0.5;
    const double lo2 = lo * lo;
    const double hi2 = hi * hi;
    ring.extent = static_cast<int>(std::ceil(hi));
    for (int dy = -ring.extent; dy <= ring.extent; ++dy) {
        int run_start = 0;
        bool in_run = false;
        for (int dx = -ring.extent; dx <= ring.extent + 1; ++dx) {
            const double d2 = static_cast<double>(dx * dx + dy * dy);
            const bool inside = dx <= ring.extent && d2 >= lo2 && d2 < hi2;
            if (inside && !in_run) {
                run_start = dx;
                in_run = true;
            } else if (!inside && in_run) {
                ring.spans.push_back({dy, run_start, dx});
                in_run = false;
            }
        }
    }
    return ring;
}

// One vote plane for cell-radius `rc`, computed by direct ring voting.
std::vector<std::uint32_t> vote_plane(const std::vector<int>& ex, const std::vector<int>& ey, double rc,
                                      int cw, int ch) {
    std::vector<std::uint32_t> acc(static_cast<std::size_t>(cw) * static_cast<std::size_t>(ch), 0);
    const Ring ring = make_ring(rc);
    for (std::size_t e = 0; e < ex.size(); ++e) {
        for (const Span& s : ring.spans) {
            const int y = ey[e] + s.dy;
            if (static_cast<unsigned>(y) >= static_cast<unsigned>(ch)) continue;
            const int xb = std::max(0, ex[e] + s.x_begin);
            const int xe = std::min(cw, ex[e] + s.x_end);
            std::uint32_t* row = acc.data() + static_cast<std::size_t>(y) * cw;
            for (int x = xb; x < xe; ++x) ++row[x];
        }
    }
    return acc;
}

struct Candidate {
    int votes = 0;
    int k = 0;
    int y = 0;
    int x = 0;
};

// More votes first; ties go to the smaller radius, then row, then column.
bool outranks(const Candidate& a, const Candidate& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.k != b.k) return a.k < b.k;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

}  // namespace

namespace {

struct EdgeList {
    std::vector<float> x, y;
};

// Quadtree node over a rectangle of accumulator cells. `bound[k]` is an upper
// bound on the votes any cell of the node can collect at radius index k; for a
// single cell it is the exact vote count.
struct Node {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // cells [x0, x1) x [y0, y1)
    int max_bound = 0;
    std::vector<int> bound;
    std::shared_ptr<const EdgeList> edges;  // edges that can still matter below this node

    bool leaf() const { return x1 - x0 == 1 && y1 - y0 == 1; }
    double cx() const { return 0.5 * (x0 + x1 - 1); }
    double cy() const { return 0.5 * (y0 + y1 - 1); }
    // Any cell of the node lies within this distance of (cx, cy).
    double half_diagonal() const {
        const double hx = 0.5 * (x1 - x0 - 1);
        const double hy = 0.5 * (y1 - y0 - 1);
        return std::sqrt(hx * hx + hy * hy);
    }
};

bool lower_bound_first(const Node& a, const Node& b) { return a.max_bound < b.max_bound; }

struct RadiusIndex {
    double offset = 0.0;  // k = floor(d + offset)
    int count = 0;
};

// Edge coordinates and node centres are multiples of 1/2 and below 2^11, so
// squared distances are exact in float and only the square root rounds. The
// margin added to non-leaf slack dwarfs that error, keeping bounds conservative.
constexpr float kFloatMargin = 4e-3f;

class PeakSearch {
public:
    explicit PeakSearch(const RadiusIndex& radii)
        : radii_(radii),
          diff_(static_cast<std::size_t>(radii.count) + 1),
          live_(static_cast<std::size_t>(radii.count) + 1) {}

    // Best-first refinement, preceded by one greedy descent so that pruning
    // starts with a realistic incumbent.
    std::optional<Candidate> run(Node root) {
        std::fill(live_.begin(), live_.end(), 0);
        for (std::size_t k = 1; k < live_.size(); ++k) live_[k] = static_cast<int>(k);
        root.edges = fill_bound(root, *root.edges);
        if (root.max_bound == 0) return std::nullopt;

        std::vector<Node> kids;
        Node cur = std::move(root);
        for (;;) {
            kids.clear();
            expand(std::move(cur), kids);
            if (kids.empty()) break;
            auto top = std::max_element(kids.begin(), kids.end(), lower_bound_first);
            cur = std::move(*top);
            kids.erase(top);
            for (auto& k : kids) push(std::move(k));
        }
        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), lower_bound_first);
            Node n = std::move(heap_.back());
            heap_.pop_back();
            if (found_ && n.max_bound < best_.votes) break;
            kids.clear();
            expand(std::move(n), kids);
            for (auto& k : kids) push(std::move(k));
        }
        if (!found_) return std::nullopt;
        return best_;
    }

private:
    void push(Node n) {
        heap_.push_back(std::move(n));
        std::push_heap(heap_.begin(), heap_.end(), lower_bound_first);
    }

    // Whether some cell of `n` at radius k can still beat or tie-break past the incumbent.
    bool promising(const Node& n, int k) const {
        const int b = n.bound[static_cast<std::size_t>(k)];
        if (!found_) return b > 0;
        if (b != best_.votes) return b > best_.votes;
        if (k != best_.k) return k < best_.k;
        return n.y0 < best_.y || (n.y0 == best_.y && n.x0 < best_.x);
    }

    // Computes n.bound from the edges of `src` whose radius range meets a live
    // radius of the parent; returns those edges.
    std::shared_ptr<const EdgeList> fill_bound(Node& n, const EdgeList& src) {
        const std::size_t m = src.x.size();
        const int top = radii_.count - 1;
        lo_.resize(m);
        hi_.resize(m);
        int* lo = lo_.data();
        int* hi = hi_.data();
        const float* xs = src.x.data();
        const float* ys = src.y.data();

        if (n.leaf()) {
            // Exact: the same arithmetic as the definition of a vote.
            const double cx = n.x0;
            const double cy = n.y0;
            for (std::size_t e = 0; e < m; ++e) {
                const double dx = xs[e] - cx;
                const double dy = ys[e] - cy;
                const double v = std::sqrt(dx * dx + dy * dy) + radii_.offset;
                // floor for non-negative v; negative v lands below 0 and is dropped
                const int k = v < 0.0 ? -1 : static_cast<int>(v);
                lo[e] = k < 0 ? 1 : k;
                hi[e] = k > top ? -1 : k;
            }
        } else {
            const float cx = static_cast<float>(n.cx());
            const float cy = static_cast<float>(n.cy());
            const float slack = static_cast<float>(n.half_diagonal()) + kFloatMargin;
            // Shifting by a whole number keeps truncation equal to floor for
            // every reachable value; the margin absorbs the rounding.
            const float lo_off = static_cast<float>(radii_.offset) - slack + 4096.0f;
            const float hi_off = static_cast<float>(radii_.offset) + slack + 4096.0f;
            for (std::size_t e = 0; e < m; ++e) {
                const float dx = xs[e] - cx;
                const float dy = ys[e] - cy;
                const float d = std::sqrt(dx * dx + dy * dy);
                lo[e] = std::max(0, static_cast<int>(d + lo_off) - 4096);
                hi[e] = std::min(top, static_cast<int>(d + hi_off) - 4096);
            }
        }

        auto kept = std::make_shared<EdgeList>();
        kept->x.resize(m);
        kept->y.resize(m);
        float* kx = kept->x.data();
        float* ky = kept->y.data();
        std::size_t count = 0;
        std::fill(diff_.begin(), diff_.end(), 0);
        int* diff = diff_.data();
        const int* live = live_.data();
        for (std::size_t e = 0; e < m; ++e) {
            const int l = lo[e];
            const int h = hi[e];
            if (l > h || live[h + 1] == live[l]) continue;
            ++diff[l];
            --diff[h + 1];
            kx[count] = xs[e];
            ky[count] = ys[e];
            ++count;
        }
        kept->x.resize(count);
        kept->y.resize(count);

        n.bound.resize(static_cast<std::size_t>(radii_.count));
        n.max_bound = 0;
        int running = 0;
        for (int k = 0; k < radii_.count; ++k) {
            running += diff[k];
            n.bound[static_cast<std::size_t>(k)] = running;
            n.max_bound = std::max(n.max_bound, running);
        }
        return kept;
    }

    void expand(Node n, std::vector<Node>& out) {
        // live_[k] counts the promising radii below k
        live_[0] = 0;
        for (int k = 0; k < radii_.count; ++k)
            live_[static_cast<std::size_t>(k) + 1] = live_[static_cast<std::size_t>(k)] + (promising(n, k) ? 1 : 0);
        if (live_.back() == 0) return;

        if (n.leaf()) {
            for (int k = 0; k < radii_.count; ++k) {
                const Candidate c{n.bound[static_cast<std::size_t>(k)], k, n.y0, n.x0};
                if (c.votes > 0 && (!found_ || outranks(c, best_))) {
                    best_ = c;
                    found_ = true;
                }
            }
            return;
        }

        const int xs[3] = {n.x0, (n.x0 + n.x1) / 2, n.x1};
        const int ys[3] = {n.y0, (n.y0 + n.y1) / 2, n.y1};
        for (int j = 0; j < 2; ++j) {
            for (int i = 0; i < 2; ++i) {
                Node child{xs[i], ys[j], xs[i + 1], ys[j + 1], 0, {}, nullptr};
                if (child.x0 >= child.x1 || child.y0 >= child.y1) continue;
                child.edges = fill_bound(child, *n.edges);
                if (child.max_bound == 0) continue;
                if (found_ && child.max_bound < best_.votes) continue;
                out.push_back(std::move(child));
            }
        }
    }

    RadiusIndex radii_;
    std::vector<int> diff_;
    std::vector<int> live_;
    std::vector<int> lo_, hi_;
    std::vector<Node> heap_;
    Candidate best_;
    bool found_ = false;
};

}  // namespace

// Exact argmax of the vote volume without materialising it. The votes of cell
// c at radius index k are the edges e with floor(|c - e| + 0.5 - rc0) == k.
// A rectangle of cells whose centre is within `slack` of all its cells can
// only receive an edge's vote at indices reachable from |centre - e| +/- slack,
// which bounds every cell of the rectangle at every radius in one pass over
// the edges. Rectangles are refined best-first; a node is dropped once it can
// neither exceed nor tie-break past the best cell seen so far, and edges that
// only reach dead radii are not passed on to its children.
CircleMeasure cht_detect(const BinaryMap& edges, double r_min, double r_max,
                         const HoughConfig& cfg, AccumulatorSlice* debug) {
    cfg.validate();
    if (!(r_min < r_max)) throw ConfigError("hough: r_min must be below r_max");

    const int bin = cfg.accumulator_bin;
    const int cw = (edges.width + bin - 1) / bin;
    const int ch = (edges.height + bin - 1) / bin;

    std::vector<int> all_x, all_y;
    for (int y = 0; y < edges.height; ++y) {
        for (int x = 0; x < edges.width; ++x) {
            if (edges.at(x, y)) {
                all_x.push_back(x / bin);
                all_y.push_back(y / bin);
            }
        }
    }
    if (all_x.empty()) throw NoCircle("no edge pixels");

    const int r_first = static_cast<int>(std::ceil(r_min));
    if (r_first > r_max) throw NoCircle("no integer radius inside the search range");
    RadiusIndex radii;
    radii.count = static_cast<int>(std::floor((r_max - r_first) / bin)) + 1;
    radii.offset = 0.5 - static_cast<double>(r_first) / bin;

    auto list = std::make_shared<EdgeList>();
    list->x.assign(all_x.begin(), all_x.end());
    list->y.assign(all_y.begin(), all_y.end());
    const std::optional<Candidate> best = PeakSearch(radii).run(Node{0, 0, cw, ch, 0, {}, std::move(list)});

    if (!best || best->votes < cfg.accumulator_threshold)
        throw NoCircle("accumulator peak " + std::to_string(best ? best->votes : 0) +
                       " below threshold " + std::to_string(cfg.accumulator_threshold));

    const int radius = r_first + best->k * bin;
    if (debug) {
        *debug = AccumulatorSlice{cw, ch, vote_plane(all_x, all_y, static_cast<double>(radius) / bin, cw, ch)};
    }
    const double half = (bin - 1) / 2.0;
    return CircleMeasure{best->x * bin + half, best->y * bin + half, static_cast<double>(radius), best->votes};
}

RadiusRange search_range(int width, int height, const HoughConfig& cfg) {
    const double r_max = cfg.r_max_mode == RadiusMode::Explicit
                             ? cfg.r_max_explicit
                             : std::min(width, height) / 2.0;
    return {cfg.r_min_frac * r_max, r_max};
}

CircleMeasure measure_pupil(const Frame& frame, std::optional<Point> center_hint,
                            const HoughConfig& cfg, bool crop, AccumulatorSlice* debug) {
    cfg.validate();
    if (!crop) {
        const auto range = search_range(frame.width(), frame.height(), cfg);
        return cht_detect(edge_map(frame, cfg), range.r_min, range.r_max, cfg, debug);
    }
    if (!center_hint) throw HintRequired("cropped measurement needs a pupil centre hint");

    const auto cropped = quarter_crop(frame, *center_hint);
    const auto range = search_range(cropped.frame.width(), cropped.frame.height(), cfg);
    CircleMeasure local =
        cht_detect(edge_map(cropped.frame, cfg), range.r_min, range.r_max, cfg, debug);
    const Point parent = cropped.window.to_parent({local.cx, local.cy});
    local.cx = parent.x;
    local.cy = parent.y;
    return local;
}

}  // namespace plrtest
