#pragma once

// Orchestrates the corpus runs: SVE simulation, reconstruction with and
// without hue correction, metric evaluation, and report aggregation. All
// stages work through files under one output directory, are idempotent
// unless forced, and parallelize over independent (scene, EV pair) tasks,
// which keeps outputs bit-identical for any worker count.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "svehdr/corpus.hpp"
#include "svehdr/io.hpp"
#include "svehdr/metrics.hpp"
#include "svehdr/pipeline.hpp"
#include "svehdr/report.hpp"

namespace svehdr {

enum class MethodSelection { conventional, proposed, both };

inline std::vector<std::string> selected_methods(MethodSelection m) {
    switch (m) {
        case MethodSelection::conventional: return {"conventional"};
        case MethodSelection::proposed: return {"proposed"};
        default: return {"conventional", "proposed"};
    }
}

struct RunConfig {
    CorpusManifest manifest;
    std::filesystem::path out_dir;
    MethodSelection method = MethodSelection::both;
    int bit_depth = 8;
    int jobs = 1;
    bool force = false;
};

// ---------------------------------------------------------------------------
// Output layout

namespace paths {

namespace fs = std::filesystem;

inline fs::path scene_pfm(const RunConfig& c, const std::string& id) {
    return c.out_dir / "scenes" / (id + ".pfm");
}
inline std::string pair_stem(const std::string& id, const EvPair& ev) {
    return id + "__" + ev_pair_token(ev);
}
inline fs::path raw_pfm(const RunConfig& c, const std::string& id, const EvPair& ev) {
    return c.out_dir / "raw" / (pair_stem(id, ev) + ".pfm");
}
inline fs::path raw_mask_png(const RunConfig& c, const std::string& id,
                             const EvPair& ev) {
    return c.out_dir / "raw" / (pair_stem(id, ev) + ".mask.png");
}
inline fs::path raw_json(const RunConfig& c, const std::string& id, const EvPair& ev) {
    return c.out_dir / "raw" / (pair_stem(id, ev) + ".json");
}
inline fs::path recon_pfm(const RunConfig& c, const std::string& id, const EvPair& ev,
                          const std::string& method) {
    return c.out_dir / "recon" / (pair_stem(id, ev) + "__" + method + ".pfm");
}
inline fs::path recon_png(const RunConfig& c, const std::string& id, const EvPair& ev,
                          const std::string& method) {
    return c.out_dir / "recon" / (pair_stem(id, ev) + "__" + method + ".png");
}
inline fs::path branches_json(const RunConfig& c, const std::string& id,
                              const EvPair& ev) {
    return c.out_dir / "recon" / (pair_stem(id, ev) + "__proposed.branches.json");
}
inline fs::path metrics_json(const RunConfig& c, const std::string& id,
                             const EvPair& ev, const std::string& method) {
    return c.out_dir / "metrics" / (pair_stem(id, ev) + "__" + method + ".json");
}
inline fs::path report_csv(const RunConfig& c) {
    return c.out_dir / "report" / "summary.csv";
}
inline fs::path report_json(const RunConfig& c) {
    return c.out_dir / "report" / "summary.json";
}

}  // namespace paths

// ---------------------------------------------------------------------------
// Parallel task execution

namespace runner_detail {

inline void parallel_for(std::int64_t n, int jobs,
                         const std::function<void(std::int64_t)>& fn) {
    int workers = static_cast<int>(std::min<std::int64_t>(std::max(jobs, 1), n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t i = next.fetch_add(1);
                if (i >= n || failed.load()) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline bool all_exist(const std::vector<std::filesystem::path>& files) {
    for (const auto& f : files)
        if (!std::filesystem::exists(f)) return false;
    return true;
}

// The stored scene is the simulation input: anchoring runs in double and
// the result is rounded through float once, so the PFM on disk and the
// in-memory values that produced the raws are bit-identical.
inline HdrImage anchored_scene(const SceneSpec& spec, std::uint64_t seed) {
    HdrImage scene;
    if (spec.recipe.empty()) {
        scene = read_hdr(spec.hdr_path);
        int w = scene.width() & ~3, h = scene.height() & ~3;
        if (w == 0 || h == 0)
            throw BadDimensions(spec.id + ": HDR input smaller than 4x4");
        if (w != scene.width() || h != scene.height()) {
            HdrImage cropped(w, h);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) cropped(x, y) = scene(x, y);
            scene = std::move(cropped);
        }
    } else {
        scene = generate_scene(spec, seed);
    }
    double gain = ExposureAnchor::middle_gray(scene).gain;
    for (Rgb& p : scene)
        p = {static_cast<double>(static_cast<float>(p.r * gain)),
             static_cast<double>(static_cast<float>(p.g * gain)),
             static_cast<double>(static_cast<float>(p.b * gain))};
    return scene;
}

inline Plane<std::uint8_t> mask_to_gray(const ClipMask& mask) {
    Plane<std::uint8_t> out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            out(x, y) = mask(x, y) == ClipFlag::under
                            ? 0
                            : (mask(x, y) == ClipFlag::over ? 255 : 128);
    return out;
}

inline void write_json_file(const nlohmann::json& j,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoFailure("short write to " + path.string());
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptHeader(path.string() + ": " + e.what());
    }
    return j;
}

}  // namespace runner_detail

// ---------------------------------------------------------------------------
// Stages

inline void run_simulate(const RunConfig& cfg) {
    cfg.manifest.validate();  // rejects missing inputs before any output exists
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir / "scenes");
    fs::create_directories(cfg.out_dir / "raw");

    const auto& scenes = cfg.manifest.scenes;
    runner_detail::parallel_for(
        static_cast<std::int64_t>(scenes.size()), cfg.jobs, [&](std::int64_t i) {
            const SceneSpec& spec = scenes[static_cast<size_t>(i)];
            std::vector<fs::path> outputs = {paths::scene_pfm(cfg, spec.id)};
            for (const EvPair& ev : cfg.manifest.ev_pairs) {
                outputs.push_back(paths::raw_pfm(cfg, spec.id, ev));
                outputs.push_back(paths::raw_mask_png(cfg, spec.id, ev));
                outputs.push_back(paths::raw_json(cfg, spec.id, ev));
            }
            if (!cfg.force && runner_detail::all_exist(outputs)) return;

            HdrImage anchored = runner_detail::anchored_scene(spec, cfg.manifest.seed);
            write_pfm(anchored, paths::scene_pfm(cfg, spec.id));

            for (const EvPair& ev : cfg.manifest.ev_pairs) {
                BayerSveImage capture = simulate_sve_capture(
                    anchored, ev.low, ev.high, ExposureAnchor{1.0}, cfg.bit_depth);
                write_pfm(capture.samples, paths::raw_pfm(cfg, spec.id, ev));
                write_png_gray(runner_detail::mask_to_gray(mosaic_clip_mask(capture)),
                               paths::raw_mask_png(cfg, spec.id, ev));
                nlohmann::json j{{"scene", spec.id},
                                 {"ev_low", ev.low},
                                 {"ev_high", ev.high},
                                 {"bit_depth", cfg.bit_depth},
                                 {"width", capture.width()},
                                 {"height", capture.height()},
                                 {"cfa", "RGGB"},
                                 {"exposure_pattern", "low_rows_first"}};
                runner_detail::write_json_file(j, paths::raw_json(cfg, spec.id, ev));
            }
        });
}

inline BayerSveImage load_capture(const RunConfig& cfg, const std::string& id,
                                  const EvPair& ev) {
    nlohmann::json j = runner_detail::read_json_file(paths::raw_json(cfg, id, ev));
    BayerSveImage x;
    x.samples = read_pfm_gray(paths::raw_pfm(cfg, id, ev));
    x.ev_low = j.at("ev_low").get<double>();
    x.ev_high = j.at("ev_high").get<double>();
    x.bit_depth = j.at("bit_depth").get<int>();
    return x;
}

inline void run_reconstruct(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir / "recon");
    const auto methods = selected_methods(cfg.method);

    std::int64_t tasks = static_cast<std::int64_t>(cfg.manifest.scenes.size()) *
                         static_cast<std::int64_t>(cfg.manifest.ev_pairs.size());
    runner_detail::parallel_for(tasks, cfg.jobs, [&](std::int64_t t) {
        const SceneSpec& spec =
            cfg.manifest.scenes[static_cast<size_t>(t) / cfg.manifest.ev_pairs.size()];
        const EvPair& ev =
            cfg.manifest.ev_pairs[static_cast<size_t>(t) % cfg.manifest.ev_pairs.size()];

        std::vector<fs::path> outputs;
        for (const std::string& m : methods) {
            outputs.push_back(paths::recon_pfm(cfg, spec.id, ev, m));
            outputs.push_back(paths::recon_png(cfg, spec.id, ev, m));
            if (m == "proposed") outputs.push_back(paths::branches_json(cfg, spec.id, ev));
        }
        if (!cfg.force && runner_detail::all_exist(outputs)) return;

        BayerSveImage capture = load_capture(cfg, spec.id, ev);
        for (const std::string& m : methods) {
            PipelineConfig pc;
            pc.hue_correction = (m == "proposed");
            PipelineResult result = run_pipeline(capture, pc);

            write_pfm(result.image, paths::recon_pfm(cfg, spec.id, ev, m));
            RgbImage display(result.image.width(), result.image.height());
            for (int y = 0; y < display.height(); ++y)
                for (int x = 0; x < display.width(); ++x)
                    display(x, y) = srgb_encode(result.image(x, y));
            write_png(display, paths::recon_png(cfg, spec.id, ev, m));

            if (result.branches) {
                const HueBranchStats& s = *result.branches;
                nlohmann::json j{{"scene", spec.id},
                                 {"ev_low", ev.low},
                                 {"ev_high", ev.high},
                                 {"achromatic", s.achromatic},
                                 {"used_low", s.used_low},
                                 {"used_high", s.used_high},
                                 {"kept_out", s.kept_out},
                                 {"pixel_count", result.image.pixel_count()}};
                runner_detail::write_json_file(j, paths::branches_json(cfg, spec.id, ev));
            }
        }
    });
}

inline void run_evaluate(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir / "metrics");
    const auto methods = selected_methods(cfg.method);

    std::int64_t tasks = static_cast<std::int64_t>(cfg.manifest.scenes.size()) *
                         static_cast<std::int64_t>(cfg.manifest.ev_pairs.size());
    runner_detail::parallel_for(tasks, cfg.jobs, [&](std::int64_t t) {
        const SceneSpec& spec =
            cfg.manifest.scenes[static_cast<size_t>(t) / cfg.manifest.ev_pairs.size()];
        const EvPair& ev =
            cfg.manifest.ev_pairs[static_cast<size_t>(t) % cfg.manifest.ev_pairs.size()];

        std::vector<fs::path> outputs;
        for (const std::string& m : methods)
            outputs.push_back(paths::metrics_json(cfg, spec.id, ev, m));
        if (!cfg.force && runner_detail::all_exist(outputs)) return;

        HdrImage anchored = read_pfm_color(paths::scene_pfm(cfg, spec.id));
        for (const std::string& m : methods) {
            RgbImage recon = read_pfm_color(paths::recon_pfm(cfg, spec.id, ev, m));
            MetricsReport r = evaluate_one(anchored, recon);
            nlohmann::json j{{"scene", spec.id},
                             {"ev_low", ev.low},
                             {"ev_high", ev.high},
                             {"method", m},
                             {"cosine_similarity_mean", r.cosine_similarity_mean},
                             {"ciede2000_hue_mean", r.ciede2000_hue_mean},
                             {"tmqi", r.tmqi},
                             {"tmqi_structural", r.tmqi_structural},
                             {"tmqi_naturalness", r.tmqi_naturalness},
                             {"pixel_count", r.pixel_count},
                             {"skipped_achromatic", r.skipped_achromatic}};
            runner_detail::write_json_file(j, paths::metrics_json(cfg, spec.id, ev, m));
        }
    });
}

inline CorpusResults collect_results(const RunConfig& cfg) {
    CorpusResults results;
    results.ev_pairs = cfg.manifest.ev_pairs;
    results.methods = selected_methods(cfg.method);
    for (const SceneSpec& spec : cfg.manifest.scenes) results.scenes.push_back(spec.id);
    for (const SceneSpec& spec : cfg.manifest.scenes) {
        for (const EvPair& ev : cfg.manifest.ev_pairs) {
            for (const std::string& m : results.methods) {
                nlohmann::json j = runner_detail::read_json_file(
                    paths::metrics_json(cfg, spec.id, ev, m));
                ScenePairResult e;
                e.scene = spec.id;
                e.ev = ev;
                e.method = m;
                e.report.cosine_similarity_mean =
                    j.at("cosine_similarity_mean").get<double>();
                e.report.ciede2000_hue_mean = j.at("ciede2000_hue_mean").get<double>();
                e.report.tmqi = j.at("tmqi").get<double>();
                e.report.tmqi_structural = j.at("tmqi_structural").get<double>();
                e.report.tmqi_naturalness = j.at("tmqi_naturalness").get<double>();
                e.report.pixel_count = j.at("pixel_count").get<std::int64_t>();
                e.report.skipped_achromatic =
                    j.at("skipped_achromatic").get<std::int64_t>();
                results.entries.push_back(std::move(e));
            }
        }
    }
    return results;
}

inline CorpusResults run_report(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir / "report");
    CorpusResults results = collect_results(cfg);
    write_report(results, paths::report_csv(cfg));
    write_report_json(results, paths::report_json(cfg));
    return results;
}

inline CorpusResults run_all(const RunConfig& cfg) {
    run_simulate(cfg);
    run_reconstruct(cfg);
    run_evaluate(cfg);
    return run_report(cfg);
}

}  // namespace svehdr
