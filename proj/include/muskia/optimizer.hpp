// optimizer.hpp - Peephole rewriting over the flat command buffer.
//
// Each rewrite is a single linear pass driven by per-layer match state
// machines: opening a layer pushes a frame, plain saves bump a counter so a
// restore knows what it closes, and matched patterns are rewritten in place
// when the layer closes. Deletions tombstone records to NoOp; new records go
// through a pending insertion list merged in one linear scan afterwards.
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "muskia/command.hpp"
#include "muskia/trace.hpp"

namespace muskia {

// Editable record sequence with stable indices: in-place replacement and
// tombstoning never shift records, and insertions stay pending until
// merge_insertions applies them all in one scan.
class RecordBuffer {
public:
    RecordBuffer() = default;
    explicit RecordBuffer(Program p) : records_(std::move(p.commands)) {}

    int size() const { return static_cast<int>(records_.size()); }
    const Command& at(int i) const { return records_[i]; }
    const std::vector<Command>& records() const { return records_; }

    void replace(int i, Command c) { records_[i] = std::move(c); }
    void tombstone(int i) { records_[i] = Command::noop(); }

    // Queues commands to appear before the record currently at `index`
    // (index == size() appends). Queue order is preserved for equal indices.
    void queue_insert(int index, std::vector<Command> cmds);
    bool has_pending() const { return !pending_.empty(); }
    const std::vector<TraceInsertion>& pending() const { return pending_; }

    // Applies all pending insertions in one linear scan; O(records + pending).
    // Throws std::out_of_range for an insertion index outside [0, size()].
    void merge_insertions();

    // Drops NoOp tombstones. Requires no pending insertions.
    void compact();

    Program to_program(bool keep_noops) const;

private:
    std::vector<Command> records_;
    std::vector<TraceInsertion> pending_;
};

// One pattern match that fired: the anchor record plus the edits applied,
// with indices as they were during the scan.
struct Firing {
    int anchor = 0;
    std::vector<TraceEdit> edits;
    std::vector<TraceInsertion> inserted;
};

struct PassResult {
    std::string pass;
    std::vector<Firing> firings;
    long long callbacks = 0;  // records visited; always equals buffer size
};

inline constexpr const char* kPassSubsumeLuma = "subsume_luma";
inline constexpr const char* kPassGradientMask = "gradient_mask";
inline constexpr const char* kPassDstInToClip = "dstin_to_clip";
inline constexpr const char* kPassSrcOverSaveLayer = "srcover_savelayer";

// Pipeline order: enabling rewrites first, so one iteration's output exposes
// the next iteration's patterns.
inline constexpr const char* kPipeline[4] = {
    kPassSubsumeLuma, kPassGradientMask, kPassDstInToClip, kPassSrcOverSaveLayer};

bool is_pass_name(std::string_view name);

// Runs one pass over the buffer (a single scan). The buffer must decode to a
// balanced program; insertions are left pending for the caller to merge.
PassResult transform(std::string_view pass_name, RecordBuffer& buf);

struct OptimizeConfig {
    int max_iterations = 4;
    std::vector<std::string> passes;  // empty = full pipeline
    bool collect_trace = true;
};

struct OptimizeResult {
    Program program;
    RewriteTrace trace;
    int edit_iterations = 0;  // pipeline iterations that changed something
    std::map<std::string, int> firings;
};

// Repeats the pass pipeline (merging insertions after each pass and
// compacting tombstones after each iteration) until a fixpoint or the
// iteration cap. The trace carries one entry and one snapshot per firing.
OptimizeResult optimize(const Program& p, const OptimizeConfig& cfg = {});

struct CostMetrics {
    long long savelayer_count = 0;
    long long draw_count = 0;
    long long clip_count = 0;
    double est_pixel_ops = 0.0;

    friend bool operator==(const CostMetrics&, const CostMetrics&) = default;
};

// Static cost proxy: record counts (tombstones excluded) plus estimated
// pixel traffic; every draw costs its clipped device-bounds area and every
// layer costs a full-viewport allocation plus final blend.
CostMetrics cost_metrics(const Program& p, int width, int height);

}  // namespace muskia
