// Command-line front end: drives SVE simulation, reconstruction, metric
// evaluation and report generation over a corpus manifest.
//
// Exit codes: 0 success, 2 input/configuration error, 3 computation error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "svehdr/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace svehdr;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;

EvPair parse_ev_token(const std::string& token) {
    try {
        auto colon = token.find(':');
        if (colon == std::string::npos) {
            double n = std::stod(token);
            if (n <= 0.0) throw InvalidManifest("");
            return {-n, n};
        }
        EvPair p{std::stod(token.substr(0, colon)), std::stod(token.substr(colon + 1))};
        validate_ev_pair(p);
        return p;
    } catch (const std::exception&) {
        throw InvalidManifest("bad EV pair '" + token +
                              "': expected a positive magnitude like 2 or low:high "
                              "like -1:3");
    }
}

CorpusManifest manifest_from_directory(const fs::path& dir) {
    CorpusManifest m;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".hdr" || ext == ".pfm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) m.scenes.push_back({f.stem().string(), "", f, 0, 0});
    if (m.scenes.empty())
        throw InvalidManifest("no .hdr or .pfm files in " + dir.string());
    return m;
}

struct Options {
    std::string input;
    std::string out = "out";
    std::vector<std::string> ev_tokens;
    std::string method = "both";
    std::uint64_t seed = 1;
    int bit_depth = 8;
    int jobs = 1;
    bool force = false;
    bool seed_given = false;
    bool ev_given = false;
};

RunConfig build_config(const Options& opt) {
    CorpusManifest manifest;
    if (opt.input.empty()) {
        manifest = CorpusManifest::builtin(opt.seed);
    } else if (fs::is_directory(opt.input)) {
        manifest = manifest_from_directory(opt.input);
        manifest.seed = opt.seed;
        manifest.ev_pairs = {{-1, 1}, {-2, 2}, {-3, 3}, {-4, 4}};
    } else if (fs::exists(opt.input)) {
        manifest = load_manifest(opt.input);
        if (opt.seed_given) manifest.seed = opt.seed;
    } else {
        throw InvalidManifest("input not found: " + opt.input);
    }
    if (opt.ev_given) {
        manifest.ev_pairs.clear();
        for (const std::string& t : opt.ev_tokens)
            manifest.ev_pairs.push_back(parse_ev_token(t));
    }
    manifest.validate();

    RunConfig cfg;
    cfg.manifest = std::move(manifest);
    cfg.out_dir = fs::path(opt.out);
    if (opt.method == "conventional")
        cfg.method = MethodSelection::conventional;
    else if (opt.method == "proposed")
        cfg.method = MethodSelection::proposed;
    else
        cfg.method = MethodSelection::both;
    cfg.bit_depth = opt.bit_depth;
    cfg.jobs = opt.jobs;
    cfg.force = opt.force;
    return cfg;
}

void print_summary(const CorpusResults& results) {
    std::printf("%-18s %-13s", "metric", "method");
    for (const EvPair& ev : results.ev_pairs)
        std::printf(" %12s", ev_pair_label(ev).c_str());
    std::printf("\n");
    const char* metrics[3] = {"cosine_similarity", "ciede2000_hue", "tmqi"};
    for (int metric = 0; metric < 3; ++metric) {
        for (const std::string& method : results.methods) {
            std::printf("%-18s %-13s", metrics[metric], method.c_str());
            for (const EvPair& ev : results.ev_pairs)
                std::printf(" %12.4f", corpus_mean(results, metric, method, ev));
            std::printf("\n");
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Single-shot HDR imaging with spatially varying exposures:\n"
        "simulate SVE captures from HDR scenes, reconstruct them with and\n"
        "without clip-aware hue correction, and compare the results."};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--input", opt.input,
                   "Corpus manifest (.json), a directory of .hdr/.pfm scenes, or "
                   "omit for the built-in synthetic corpus");
    app.add_option("--out", opt.out, "Output directory (default: out)");
    auto* ev_opt =
        app.add_option("--ev-pairs", opt.ev_tokens,
                       "EV pairs: magnitude (2 means -2:+2) or low:high, "
                       "comma separated (default: 1,2,3,4)")
            ->delimiter(',');
    app.add_option("--method", opt.method, "conventional, proposed or both")
        ->check(CLI::IsMember({"conventional", "proposed", "both"}));
    auto* seed_opt = app.add_option("--seed", opt.seed, "Corpus seed (default: 1)");
    app.add_option("--bit-depth", opt.bit_depth, "Sensor bit depth")
        ->check(CLI::IsMember({8, 10, 12, 14, 16}));
    app.add_option("--jobs", opt.jobs, "Parallel workers (default: 1)")
        ->check(CLI::Range(1, 256));
    app.add_flag("--force", opt.force, "Rewrite outputs that already exist");

    auto* sim = app.add_subcommand("simulate", "Write SVE raws and clip masks");
    auto* rec = app.add_subcommand("reconstruct", "Run the reconstruction pipeline");
    auto* eva = app.add_subcommand("evaluate", "Score reconstructions against the reference");
    auto* rep = app.add_subcommand("report", "Aggregate metric files into CSV tables");
    auto* all = app.add_subcommand("all", "simulate, reconstruct, evaluate, report");
    for (auto* sub : {sim, rec, eva, rep, all}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }
    opt.seed_given = seed_opt->count() > 0;
    opt.ev_given = ev_opt->count() > 0;

    RunConfig cfg;
    try {
        cfg = build_config(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (sim->parsed()) {
            run_simulate(cfg);
            std::printf("simulated %zu scenes x %zu EV pairs -> %s\n",
                        cfg.manifest.scenes.size(), cfg.manifest.ev_pairs.size(),
                        (cfg.out_dir / "raw").string().c_str());
        } else if (rec->parsed()) {
            run_reconstruct(cfg);
            std::printf("reconstructed -> %s\n", (cfg.out_dir / "recon").string().c_str());
        } else if (eva->parsed()) {
            run_evaluate(cfg);
            std::printf("evaluated -> %s\n", (cfg.out_dir / "metrics").string().c_str());
        } else if (rep->parsed()) {
            print_summary(run_report(cfg));
            std::printf("report -> %s\n", paths::report_csv(cfg).string().c_str());
        } else if (all->parsed()) {
            print_summary(run_all(cfg));
            std::printf("report -> %s\n", paths::report_csv(cfg).string().c_str());
        }
    } catch (const InvalidManifest& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitOk;
}
