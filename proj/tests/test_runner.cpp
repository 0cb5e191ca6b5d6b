#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "svehdr/runner.hpp"

using namespace svehdr;
namespace fs = std::filesystem;

namespace {

CorpusManifest small_manifest() {
    CorpusManifest m;
    m.seed = 5;
    m.ev_pairs = {{-2.0, 2.0}};
    m.scenes = {{"mix", "mixed", {}, 192, 192},
                {"spot", "spotlight_patches", {}, 192, 192}};
    return m;
}

RunConfig config_for(const fs::path& out, int jobs) {
    RunConfig cfg;
    cfg.manifest = small_manifest();
    cfg.out_dir = out;
    cfg.jobs = jobs;
    return cfg;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("runner produces the full output tree and is idempotent") {
    fs::path out = fs::temp_directory_path() / "svehdr_runner_test";
    fs::remove_all(out);
    RunConfig cfg = config_for(out, 2);

    CorpusResults results = run_all(cfg);
    EvPair ev = cfg.manifest.ev_pairs[0];

    CHECK(fs::exists(paths::scene_pfm(cfg, "mix")));
    CHECK(fs::exists(paths::raw_pfm(cfg, "mix", ev)));
    CHECK(fs::exists(paths::raw_mask_png(cfg, "mix", ev)));
    CHECK(fs::exists(paths::recon_pfm(cfg, "mix", ev, "conventional")));
    CHECK(fs::exists(paths::recon_png(cfg, "mix", ev, "proposed")));
    CHECK(fs::exists(paths::branches_json(cfg, "mix", ev)));
    CHECK(fs::exists(paths::metrics_json(cfg, "mix", ev, "proposed")));
    CHECK(fs::exists(paths::report_csv(cfg)));
    CHECK(results.entries.size() == 2 * 1 * 2);

    // Branch counters cover every pixel.
    nlohmann::json branches =
        runner_detail::read_json_file(paths::branches_json(cfg, "mix", ev));
    std::int64_t total = branches.at("achromatic").get<std::int64_t>() +
                         branches.at("used_low").get<std::int64_t>() +
                         branches.at("used_high").get<std::int64_t>() +
                         branches.at("kept_out").get<std::int64_t>();
    CHECK(total == branches.at("pixel_count").get<std::int64_t>());

    // Without --force nothing is rewritten: plant garbage and rerun.
    fs::path victim = paths::recon_pfm(cfg, "mix", ev, "conventional");
    {
        std::ofstream f(victim, std::ios::trunc);
        f << "garbage";
    }
    run_reconstruct(cfg);
    CHECK(slurp(victim).size() == 7);

    // With force the stage rebuilds the file.
    cfg.force = true;
    run_reconstruct(cfg);
    CHECK(slurp(victim).size() > 7);
}

TEST_CASE("outputs are bit-identical regardless of worker count") {
    fs::path out1 = fs::temp_directory_path() / "svehdr_runner_jobs1";
    fs::path out4 = fs::temp_directory_path() / "svehdr_runner_jobs4";
    fs::remove_all(out1);
    fs::remove_all(out4);

    run_all(config_for(out1, 1));
    run_all(config_for(out4, 4));

    std::vector<fs::path> rel;
    for (const auto& entry : fs::recursive_directory_iterator(out1))
        if (entry.is_regular_file()) rel.push_back(fs::relative(entry.path(), out1));
    std::sort(rel.begin(), rel.end());
    CHECK(rel.size() > 10);
    for (const fs::path& r : rel) {
        INFO("file " << r);
        REQUIRE(fs::exists(out4 / r));
        CHECK(slurp(out1 / r) == slurp(out4 / r));
    }
}

TEST_CASE("simulate validates inputs before writing anything") {
    fs::path out = fs::temp_directory_path() / "svehdr_runner_invalid";
    fs::remove_all(out);
    RunConfig cfg = config_for(out, 1);
    cfg.manifest.scenes.push_back({"ghost", "", "/nonexistent/scene.hdr", 0, 0});
    CHECK_THROWS_AS(run_simulate(cfg), InvalidManifest);
    CHECK(!fs::exists(out));
}
