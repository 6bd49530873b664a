// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "plrtest/cli.hpp"
#include "plrtest/error.hpp"
#include "plrtest/eval.hpp"
#include "plrtest/hough.hpp"
#include "plrtest/rapd.hpp"
#include "plrtest/starburst.hpp"
#include "plrtest/text.hpp"
#include "plrtest/trace.hpp"

#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace plrtest;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void run(const char* id, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %s  %s  [%.2f s, limit %.0f s%s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                limit_s, in_time ? "" : ", TOO SLOW");
    std::fflush(stdout);
}

Outcome ac1() {
    const ConfusionCounts c{15, 14, 2, 1};
    const double se = sensitivity(c), sp = specificity(c), pr = precision(c);
    const double f1 = f_beta(pr, se, 1.0);
    const bool ok = std::fabs(se - 0.938) <= 0.001 && std::fabs(sp - 0.875) <= 0.001 &&
                    std::fabs(pr - 0.882) <= 0.001 && std::fabs(f1 - 0.909) <= 0.001 && c.fp == 2 &&
                    c.fn == 1 && c.total() == 32;
    return {ok, fmt("sens=%.4f spec=%.4f prec=%.4f F1=%.4f fp=%d fn=%d n=%d", se, sp, pr, f1, c.fp, c.fn,
                    c.total())};
}

Outcome ac2() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> up(0.001, 1.0), ub(0.05, 5.0);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double p = up(rng), b = ub(rng);
        worst = std::max(worst, std::fabs(f_beta(p, p, b) - p));
    }
    const double p = 0.882, r = 0.938;
    const double v05 = f_beta(p, r, 0.5, FVariant::Table2), v2 = f_beta(p, r, 2.0, FVariant::Table2);
    const double s05 = f_beta(p, r, 0.5), s2 = f_beta(p, r, 2.0);
    const bool ok = worst <= 1e-12 && std::fabs(v05 - 2.273) <= 0.001 && std::fabs(v2 - 0.568) <= 0.001;
    return {ok, fmt("max|F(p,p)-p|=%.1e table-variant F0.5=%.3f F2=%.3f (standard formula: %.3f, %.3f)", worst,
                    v05, v2, s05, s2)};
}

Outcome ac3() {
    std::mt19937_64 rng(3);
    double worst = 0;
    for (int t = 0; t < 500; ++t) {
        const int n = 2 + static_cast<int>(rng() % 9);
        std::vector<double> s;
        std::vector<bool> y;
        for (int i = 0; i < n; ++i) {
            s.push_back(static_cast<double>(rng() % 8) / 7.0);
            y.push_back(rng() % 2);
        }
        const auto positives = std::count(y.begin(), y.end(), true);
        if (positives == 0 || positives == n) y[0] = !y[0];  // both classes must occur
        double wins = 0, pairs = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (y[i] && !y[j]) {
                    pairs += 1;
                    wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
                }
        worst = std::max(worst, std::fabs(auc(roc_curve(s, y)) - wins / pairs));
    }
    return {worst <= 1e-9, fmt("500 manifests, max |AUC - pair statistic| = %.1e", worst)};
}

Outcome ac4() {
    int clean_ok = 0, noisy_ok = 0;
    double clean_max = 0, noisy_max = 0;
    for (const auto& c : fixtures::disc_cases(100, 0.0)) {
        const auto e = locate_pupil(c.frame);
        const double err = std::hypot(e.x - c.center.x, e.y - c.center.y);
        clean_ok += e.valid && err <= 2.0;
        clean_max = std::max(clean_max, err);
    }
    for (const auto& c : fixtures::disc_cases(100, 8.0)) {
        const auto e = locate_pupil(c.frame);
        const double err = std::hypot(e.x - c.center.x, e.y - c.center.y);
        noisy_ok += e.valid && err <= 3.0;
        noisy_max = std::max(noisy_max, err);
    }
    return {clean_ok == 100 && noisy_ok >= 95,
            fmt("noiseless %d/100 within 2 px (max %.2f); sigma 8 %d/100 within 3 px (max %.2f)", clean_ok,
                clean_max, noisy_ok, noisy_max)};
}

Outcome ac5() {
    const HoughConfig cfg;
    auto radius_hits = [&](double sigma, double tol, double& worst) {
        int ok = 0;
        for (const auto& c : fixtures::disc_cases(100, sigma)) {
            double err = 1e9;
            try {
                err = std::fabs(measure_pupil(c.frame, std::nullopt, cfg, false).radius - c.radius);
            } catch (const NoCircle&) {
            }
            ok += err <= tol;
            worst = std::max(worst, err);
        }
        return ok;
    };
    double clean_max = 0, noisy_max = 0;
    const int clean_ok = radius_hits(0.0, 1.0, clean_max);
    const int noisy_ok = radius_hits(8.0, 2.0, noisy_max);

    int wins = 0;
    for (const auto& d : fixtures::distractor_cases(100)) {
        const auto sb = locate_pupil(d.frame);
        double crop_err = 1e9, full_err = 1e9;
        try {
            full_err = std::fabs(measure_pupil(d.frame, std::nullopt, cfg, false).radius - d.radius);
        } catch (const NoCircle&) {
        }
        try {
            if (sb.valid) crop_err = std::fabs(measure_pupil(d.frame, Point{sb.x, sb.y}, cfg, true).radius - d.radius);
        } catch (const NoCircle&) {
        }
        wins += crop_err < full_err;
    }
    return {clean_ok == 100 && noisy_ok >= 95 && wins >= 95,
            fmt("full-frame radius: noiseless %d/100 within 1 px (max %.2f), sigma 8 %d/100 within 2 px (max %.2f); "
                "crop beats full on eyebrow fixture %d/100",
                clean_ok, clean_max, noisy_ok, noisy_max, wins)};
}

Outcome ac6() {
    fixtures::TempDir dir("acceptance_e2e");
    const std::string data = (dir / "data").string(), report = (dir / "report").string();
    std::ostringstream out, err;
    auto call = [&](std::vector<std::string> args) {
        args.insert(args.begin(), "plrtest");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    };
    if (call({"synth", "--out", data, "--cases", "40", "--rapd-fraction", "0.5", "--severity-min", "0.2",
              "--severity-max", "0.5", "--noise", "5", "--seed", "11"}) != 0)
        return {false, "synth failed: " + err.str()};
    if (call({"evaluate", "--data", data, "--out", report, "--configs", "all"}) != 0)
        return {false, "evaluate failed: " + err.str()};

    std::ifstream in(dir / "report" / "summary.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    double best_auc = -1, min_auc = 2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        const auto f = split_csv_line(line);
        const double a = parse_double(f.at(8), "auc");
        min_auc = std::min(min_auc, a);
        if (f.at(0) == "crop-motion-smooth-plcc") best_auc = a;
    }
    return {rows == 16 && best_auc >= 0.9,
            fmt("40 cases sigma 5: crop-motion-smooth-plcc AUC %.3f, %d summary rows, lowest AUC over grid %.3f",
                best_auc, rows, min_auc)};
}

Outcome ac7() {
    auto trace = [](const std::vector<double>& cx, const std::vector<double>& cy) {
        PupilTrace t;
        for (std::size_t i = 0; i < cx.size(); ++i) t.samples.push_back({int(i), cx[i], cy[i], 30.0 + double(i), true});
        return t;
    };
    auto validity = [](const PupilTrace& t) {
        std::vector<bool> v;
        for (const auto& s : t.samples) v.push_back(s.valid);
        return v;
    };
    const TraceConfig cfg;
    const bool m0 = validity(motion_filter(trace({200, 200, 200}, {200, 200, 200}), cfg)) ==
                    std::vector<bool>{true, true, true};
    const bool m1 = validity(motion_filter(trace({200, 201, 199, 200, 230}, {200, 200, 200, 200, 200}), cfg)) ==
                    std::vector<bool>{true, true, true, true, false};
    const bool m2 = validity(motion_filter(trace({300, 300, 300, 300}, {240, 240, 240, 280}), cfg)) ==
                    std::vector<bool>{true, true, true, false};
    const bool med = median_filter({2, 100, 3, 4, 5}, 3) == std::vector<double>{2, 3, 4, 4, 5};

    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0, 1);
    int sym_ok = 0, self_ok = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 3 + static_cast<int>(rng() % 60);
        std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
        for (auto& x : a) x = g(rng);
        for (auto& x : b) x = g(rng);
        const auto kind = t % 2 ? DissimilarityKind::OneMinusPlcc : DissimilarityKind::OneMinusSrcc;
        sym_ok += dissimilarity(a, b, kind) == dissimilarity(b, a, kind);
        self_ok += dissimilarity(a, a, kind) == 0.0;
    }
    return {m0 && m1 && m2 && med && sym_ok == 1000 && self_ok == 1000,
            fmt("motion examples %s, median [2,100,3,4,5] %s, d(a,a)=0 %d/1000, symmetric %d/1000",
                m0 && m1 && m2 ? "exact" : "WRONG", med ? "-> [2,3,4,4,5]" : "WRONG", self_ok, sym_ok)};
}

}  // namespace

int main() {
    run("AC1", 1, ac1);
    run("AC2", 1, ac2);
    run("AC3", 5, ac3);
    run("AC4", 30, ac4);
    run("AC5", 60, ac5);
    run("AC6", 300, ac6);
    run("AC7", 5, ac7);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
