// muskia.cpp - Batch command line: render, optimize, validate, diff, bench,
// stats, corpus.
//
// Exit codes: 0 success (and "no difference" / "validated"); 1 negative
// verdict (pixels differ, trace not validated); 2 input parse or validation
// error; 3 I/O error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muskia/corpus.hpp"
#include "muskia/format.hpp"
#include "muskia/optimizer.hpp"
#include "muskia/raster.hpp"
#include "muskia/validator.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitParse = 2;
constexpr int kExitIo = 3;

std::uint64_t env_seed(std::uint64_t fallback) {
    if (const char* s = std::getenv("MUSKIA_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
            std::cerr << "warning: ignoring unparsable MUSKIA_SEED\n";
        }
    }
    return fallback;
}

json metrics_json(const muskia::CostMetrics& m) {
    return json{{"savelayer_count", m.savelayer_count},
                {"draw_count", m.draw_count},
                {"clip_count", m.clip_count},
                {"est_pixel_ops", m.est_pixel_ops}};
}

int cmd_render(const std::string& input, int width, int height,
               const std::string& out, int threads) {
    const muskia::Program p = muskia::load_program_file(input);
    muskia::RasterOptions opts;
    opts.threads = threads;
    const muskia::RasterImage img = muskia::rasterize(p, width, height, opts);
    muskia::write_ppm_file(img, out);
    return kExitOk;
}

int cmd_optimize(const std::string& input, const std::string& out,
                 const std::string& trace_path, const std::string& passes,
                 int max_iters, int width, int height) {
    const muskia::Program p = muskia::load_program_file(input);
    muskia::OptimizeConfig cfg;
    cfg.max_iterations = max_iters;
    cfg.collect_trace = !trace_path.empty();
    if (!passes.empty()) {
        std::stringstream ss(passes);
        std::string name;
        while (std::getline(ss, name, ',')) cfg.passes.push_back(name);
    }
    const muskia::OptimizeResult res = muskia::optimize(p, cfg);
    if (!out.empty()) muskia::save_program_file(res.program, out);
    if (!trace_path.empty()) muskia::trace_to_file(res.trace, trace_path);

    json report;
    report["schema_version"] = 1;
    report["metrics_before"] = metrics_json(muskia::cost_metrics(p, width, height));
    report["metrics_after"] =
        metrics_json(muskia::cost_metrics(res.program, width, height));
    report["edit_iterations"] = res.edit_iterations;
    json firings = json::object();
    for (const auto& [pass, count] : res.firings) firings[pass] = count;
    report["firings"] = std::move(firings);
    std::cout << report.dump(2) << '\n';
    return kExitOk;
}

int cmd_validate(const std::string& trace_path, int resolution, int samples) {
    std::ifstream is(trace_path);
    if (!is) throw muskia::IoError("cannot open for reading: " + trace_path);
    std::ostringstream ss;
    ss << is.rdbuf();
    json doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded())
        throw muskia::FormatError(muskia::FormatError::Kind::Schema, "",
                                  "invalid JSON");
    muskia::ValidatorConfig cfg;
    cfg.resolution = resolution;
    cfg.samples = samples;
    cfg.seed = env_seed(cfg.seed);
    const muskia::Verdict v = muskia::validate_trace_json(doc, cfg);
    std::cout << muskia::verdict_to_json(v).dump(2) << '\n';
    std::cerr << "verdict: " << muskia::overall_name(v.overall);
    if (!v.validated()) std::cerr << " (step " << v.failed_step << ": " << v.reason << ")";
    std::cerr << '\n';
    return v.validated() ? kExitOk : kExitNegative;
}

int cmd_diff(const std::string& a_path, const std::string& b_path, double fuzz) {
    const muskia::RasterImage a = muskia::read_ppm_file(a_path);
    const muskia::RasterImage b = muskia::read_ppm_file(b_path);
    const muskia::DiffReport rep = muskia::image_diff_ae(a, b, fuzz);
    json out;
    out["schema_version"] = 1;
    out["differing_pixels"] = rep.differing_pixels;
    out["max_channel_delta"] = rep.max_channel_delta;
    out["total_pixels"] = rep.total_pixels;
    std::cout << out.dump() << '\n';
    return rep.differing_pixels == 0 ? kExitOk : kExitNegative;
}

int cmd_bench(const std::vector<std::string>& inputs, int reps, int width,
              int height) {
    using Clock = std::chrono::steady_clock;
    json programs = json::array();
    double log_sum = 0.0;
    int counted = 0;
    for (const std::string& path : inputs) {
        const muskia::Program p = muskia::load_program_file(path);
        muskia::OptimizeConfig cfg;
        cfg.collect_trace = false;

        muskia::optimize(p, cfg);  // warm-up
        std::vector<double> times;
        times.reserve(reps);
        muskia::OptimizeResult res;
        for (int i = 0; i < reps; ++i) {
            const auto t0 = Clock::now();
            res = muskia::optimize(p, cfg);
            const auto t1 = Clock::now();
            times.push_back(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
        }
        std::sort(times.begin(), times.end());
        const double median = times[times.size() / 2];

        const muskia::CostMetrics before = muskia::cost_metrics(p, width, height);
        const muskia::CostMetrics after =
            muskia::cost_metrics(res.program, width, height);
        const double speedup =
            after.est_pixel_ops > 0.0 ? before.est_pixel_ops / after.est_pixel_ops : 1.0;
        log_sum += std::log(speedup);
        ++counted;

        programs.push_back(json{{"name", path},
                                {"records", p.commands.size()},
                                {"optimize_time_ns", median},
                                {"metrics_before", metrics_json(before)},
                                {"metrics_after", metrics_json(after)},
                                {"speedup_proxy", speedup}});
    }
    json out;
    out["schema_version"] = 1;
    out["repetitions"] = reps;
    out["programs"] = std::move(programs);
    out["aggregate"] = {
        {"geomean_speedup_proxy", counted > 0 ? std::exp(log_sum / counted) : 1.0}};
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_stats(const std::string& input, int width, int height) {
    const muskia::Program p = muskia::load_program_file(input);
    json out;
    out["schema_version"] = 1;
    out["records"] = p.commands.size();
    out["metrics"] = metrics_json(muskia::cost_metrics(p, width, height));
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_corpus(std::uint64_t seed, int count, const std::string& out_dir) {
    const auto entries =
        muskia::generate_corpus(env_seed(seed), count, muskia::CorpusMix::standard());
    json manifest = json::array();
    for (const auto& e : entries) {
        const std::string path = out_dir + "/" + e.name + ".json";
        muskia::save_program_file(e.program, path);
        json firings = json::object();
        for (const auto& [pass, n] : e.expected_firings) firings[pass] = n;
        manifest.push_back(json{{"name", e.name},
                                {"family", muskia::corpus_family_name(e.family)},
                                {"file", path},
                                {"expected_firings", std::move(firings)}});
    }
    json out;
    out["schema_version"] = 1;
    out["entries"] = std::move(manifest);
    std::ofstream os(out_dir + "/manifest.json");
    if (!os) throw muskia::IoError("cannot open for writing: " + out_dir + "/manifest.json");
    os << out.dump(2) << '\n';
    std::cout << "wrote " << entries.size() << " programs to " << out_dir << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"display-list renderer, optimizer, and translation validator"};
    app.require_subcommand(1);

    // render
    auto* render = app.add_subcommand("render", "rasterize a program to PPM");
    std::string in_path, out_path;
    int width = 256, height = 256, threads = 0;
    render->add_option("input", in_path)->required();
    render->add_option("--width", width);
    render->add_option("--height", height);
    render->add_option("--out", out_path)->required();
    render->add_option("--threads", threads);

    // optimize
    auto* opt = app.add_subcommand("optimize", "rewrite a program");
    std::string opt_in, opt_out, opt_trace, opt_passes;
    int max_iters = 4;
    opt->add_option("input", opt_in)->required();
    opt->add_option("--out", opt_out);
    opt->add_option("--trace", opt_trace);
    opt->add_option("--passes", opt_passes, "comma-separated subset, pipeline order");
    opt->add_option("--max-iters", max_iters);

    // validate
    auto* val = app.add_subcommand("validate", "validate an optimization trace");
    std::string trace_path;
    int resolution = 256, samples = 4096;
    val->add_option("trace", trace_path)->required();
    val->add_option("--resolution", resolution);
    val->add_option("--samples", samples);

    // diff
    auto* diff = app.add_subcommand("diff", "AE pixel diff of two PPM images");
    std::string diff_a, diff_b;
    double fuzz = 0.01;
    diff->add_option("a", diff_a)->required();
    diff->add_option("b", diff_b)->required();
    diff->add_option("--fuzz", fuzz);

    // bench
    auto* bench = app.add_subcommand("bench", "time the optimizer on programs");
    std::vector<std::string> bench_inputs;
    int reps = 15;
    bench->add_option("inputs", bench_inputs)->required()->expected(-1);
    bench->add_option("--reps", reps)->check(CLI::Range(10, 1000000));

    // stats
    auto* stats = app.add_subcommand("stats", "cost metrics of a program");
    std::string stats_in;
    stats->add_option("input", stats_in)->required();
    stats->add_option("--width", width);
    stats->add_option("--height", height);

    // corpus
    auto* corpus = app.add_subcommand("corpus", "emit generated sample programs");
    std::uint64_t seed = 1;
    int count = 16;
    std::string out_dir = ".";
    corpus->add_option("--seed", seed);
    corpus->add_option("--count", count);
    corpus->add_option("--out-dir", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed()) return cmd_render(in_path, width, height, out_path, threads);
        if (opt->parsed())
            return cmd_optimize(opt_in, opt_out, opt_trace, opt_passes, max_iters,
                                width, height);
        if (val->parsed()) return cmd_validate(trace_path, resolution, samples);
        if (diff->parsed()) return cmd_diff(diff_a, diff_b, fuzz);
        if (bench->parsed()) return cmd_bench(bench_inputs, reps, width, height);
        if (stats->parsed()) return cmd_stats(stats_in, width, height);
        if (corpus->parsed()) return cmd_corpus(seed, count, out_dir);
    } catch (const muskia::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const muskia::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    return kExitOk;
}
