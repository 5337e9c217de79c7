// validator.hpp - Translation validation of optimization traces.
//
// Every trace step is certified three ways, none of which reuses the
// optimizer's matchers:
//   1. sidecheck   - a straight-line re-scan of the before program verifying
//                    the claimed pattern and every side condition, plus that
//                    replaying the recorded edits reproduces the after
//                    snapshot;
//   2. differential - both snapshots rasterized and AE-diffed at fuzz;
//   3. symbolic     - sampled extensional equivalence of the two denotations
//                     (shape corners plus seeded uniform points).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "muskia/raster.hpp"
#include "muskia/trace.hpp"

namespace muskia {

struct ValidatorConfig {
    int resolution = 256;
    int samples = 4096;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    double fuzz = 0.01;
    double tol = 1e-6;
};

struct StepVerdict {
    int step = 0;
    std::string pass;
    bool sidecheck_ok = false;
    std::string sidecheck_reason;
    DiffReport differential;
    bool differential_ok = false;
    bool symbolic_ok = false;
    Point symbolic_worst{};
    double symbolic_delta = 0.0;
};

struct Verdict {
    enum class Overall {
        Validated,     // every step passed all three checks
        Refuted,       // a step's images or denotations demonstrably differ
        Inconclusive,  // a claim could not be certified (no counterexample)
    };

    Overall overall = Overall::Validated;
    int failed_step = -1;
    std::string reason;
    std::vector<StepVerdict> steps;

    bool validated() const { return overall == Overall::Validated; }
};

const char* overall_name(Verdict::Overall o);

Verdict validate_trace(const RewriteTrace& trace, const ValidatorConfig& cfg = {});

// Decodes and validates; snapshots the validator cannot decode (format
// version skew and the like) yield an inconclusive verdict, never a
// validated one.
Verdict validate_trace_json(const nlohmann::json& doc, const ValidatorConfig& cfg = {});

nlohmann::json verdict_to_json(const Verdict& v);

}  // namespace muskia
