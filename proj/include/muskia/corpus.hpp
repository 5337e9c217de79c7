// corpus.hpp - Deterministic program generator: rewritable pattern instances,
// near-miss side-condition violations, and unstructured programs, each
// annotated with its ground-truth pass firing counts.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "muskia/command.hpp"

namespace muskia {

enum class CorpusFamily {
    SrcOverLayer,      // one rewritable SrcOver layer
    DstInClip,         // one rewritable DstIn mask
    SubsumeLuma,       // luminance conversion nest (sometimes cascading)
    GradientMask,      // redundant opaque gradient mask
    NearMissSrcOver,   // side-condition violations: zero firings
    NearMissDstIn,
    NearMissLuma,
    NearMissGradient,
    Unstructured,      // random balanced programs, no rewritable patterns
    CascadeNest,       // luma in a DstIn mask in an opaque SrcOver layer
};

const char* corpus_family_name(CorpusFamily f);

struct CorpusMix {
    std::vector<std::pair<CorpusFamily, double>> weights;

    static CorpusMix standard();                 // everything
    static CorpusMix only(CorpusFamily f);
    static CorpusMix rewritable();               // the four pattern families
    static CorpusMix near_miss();                // the four near-miss families
};

struct CorpusEntry {
    std::string name;
    CorpusFamily family = CorpusFamily::Unstructured;
    Program program;
    // Ground-truth firing counts per pass over a full fixpoint optimization,
    // known by construction.
    std::map<std::string, int> expected_firings;
};

// Deterministic in `seed`; entry i depends only on (seed, i), so a longer run
// extends a shorter one.
std::vector<CorpusEntry> generate_corpus(std::uint64_t seed, int count,
                                         const CorpusMix& mix);

// The cascading shape from real page captures: a luminance filter nested in a
// DstIn mask nested in an opaque SrcOver layer. Three passes fire across
// pipeline iterations; the result has no layers left.
Program cascade_nest_program(std::uint64_t seed);

// Large unstructured program of exactly `records` commands, for timing runs.
Program large_program(std::uint64_t seed, int records);

// A near-miss program paired with the program the pass WOULD produce if its
// side condition were ignored. Rendering the two must differ; the shipped
// pass must leave the original untouched.
struct NearMissForced {
    std::string pass;
    Program original;
    Program forced;
};

NearMissForced near_miss_with_forced(const std::string& pass, std::uint64_t seed);

}  // namespace muskia
