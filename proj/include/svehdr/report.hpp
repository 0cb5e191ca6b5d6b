#pragma once

// Corpus-level result aggregation and the CSV report: one row per
// (metric, method, scene) with a column per EV pair, plus MEAN rows that
// mirror the usual comparison-table layout.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "svehdr/corpus.hpp"
#include "svehdr/metrics.hpp"

namespace svehdr {

inline std::string method_name(bool proposed) {
    return proposed ? "proposed" : "conventional";
}

// Filesystem-safe token, e.g. (-1,+1) -> "ev_m1_p1".
inline std::string ev_pair_token(const EvPair& p) {
    auto enc = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", std::fabs(v));
        return std::string(v < 0 ? "m" : "p") + buf;
    };
    return "ev_" + enc(p.low) + "_" + enc(p.high);
}

// Human-readable column label, e.g. "+/-1EV" for symmetric pairs.
inline std::string ev_pair_label(const EvPair& p) {
    char buf[64];
    if (p.high == -p.low)
        std::snprintf(buf, sizeof buf, "+/-%gEV", p.high);
    else
        std::snprintf(buf, sizeof buf, "%+g/%+gEV", p.low, p.high);
    return std::string(buf);
}

struct ScenePairResult {
    std::string scene;
    EvPair ev;
    std::string method;  // "conventional" or "proposed"
    MetricsReport report;
};

struct CorpusResults {
    std::vector<EvPair> ev_pairs;
    std::vector<std::string> scenes;   // report row order
    std::vector<std::string> methods;  // subset of {conventional, proposed}
    std::vector<ScenePairResult> entries;

    const MetricsReport* find(const std::string& scene, const EvPair& ev,
                              const std::string& method) const {
        for (const auto& e : entries)
            if (e.scene == scene && e.method == method && e.ev.low == ev.low &&
                e.ev.high == ev.high)
                return &e.report;
        return nullptr;
    }
};

namespace report_detail {

inline const char* kMetricNames[5] = {"cosine_similarity", "ciede2000_hue", "tmqi",
                                      "tmqi_structural", "tmqi_naturalness"};

inline double metric_value(const MetricsReport& r, int metric) {
    switch (metric) {
        case 0: return r.cosine_similarity_mean;
        case 1: return r.ciede2000_hue_mean;
        case 2: return r.tmqi;
        case 3: return r.tmqi_structural;
        default: return r.tmqi_naturalness;
    }
}

inline std::string format4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
}

}  // namespace report_detail

// Per-(metric, method, ev) corpus means, full precision.
inline double corpus_mean(const CorpusResults& results, int metric,
                          const std::string& method, const EvPair& ev) {
    KahanSum sum;
    std::int64_t n = 0;
    for (const std::string& scene : results.scenes) {
        const MetricsReport* r = results.find(scene, ev, method);
        if (!r) throw IoFailure("report: missing result for scene '" + scene + "'");
        sum.add(report_detail::metric_value(*r, metric));
        ++n;
    }
    return sum.value() / static_cast<double>(n);
}

inline void write_report(const CorpusResults& results,
                         const std::filesystem::path& csv_path) {
    if (results.entries.empty() || results.scenes.empty() ||
        results.ev_pairs.empty() || results.methods.empty())
        throw IoFailure("report: no results to write");

    std::string text = "metric,method,scene";
    for (const EvPair& ev : results.ev_pairs) text += "," + ev_pair_label(ev);
    text += "\n";

    for (int metric = 0; metric < 5; ++metric) {
        for (const std::string& method : results.methods) {
            text += std::string(report_detail::kMetricNames[metric]) + "," + method +
                    ",MEAN";
            for (const EvPair& ev : results.ev_pairs)
                text += "," + report_detail::format4(corpus_mean(results, metric, method, ev));
            text += "\n";
        }
        for (const std::string& scene : results.scenes) {
            for (const std::string& method : results.methods) {
                text += std::string(report_detail::kMetricNames[metric]) + "," + method +
                        "," + scene;
                for (const EvPair& ev : results.ev_pairs) {
                    const MetricsReport* r = results.find(scene, ev, method);
                    if (!r)
                        throw IoFailure("report: missing result for scene '" + scene +
                                        "'");
                    text += "," + report_detail::format4(
                                      report_detail::metric_value(*r, metric));
                }
                text += "\n";
            }
        }
    }

    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + csv_path.string() + " for writing");
    out << text;
    if (!out) throw IoFailure("short write to " + csv_path.string());
}

// Full-precision companion of the CSV, for machine consumption.
inline void write_report_json(const CorpusResults& results,
                              const std::filesystem::path& json_path) {
    if (results.entries.empty()) throw IoFailure("report: no results to write");
    nlohmann::json j;
    j["ev_pairs"] = nlohmann::json::array();
    for (const EvPair& ev : results.ev_pairs)
        j["ev_pairs"].push_back({ev.low, ev.high});
    j["means"] = nlohmann::json::array();
    for (int metric = 0; metric < 5; ++metric)
        for (const std::string& method : results.methods)
            for (const EvPair& ev : results.ev_pairs)
                j["means"].push_back(
                    {{"metric", report_detail::kMetricNames[metric]},
                     {"method", method},
                     {"ev_low", ev.low},
                     {"ev_high", ev.high},
                     {"value", corpus_mean(results, metric, method, ev)}});
    std::ofstream out(json_path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + json_path.string() + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace svehdr
