#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bpmac/mac.hpp"

namespace bpmac {

// Latency is reported per phase. For the precomputed scheme the
// latency-critical phase is the table scan plus XORs with a warm masking
// cache; preprocessing is the amortized per-tag masking cost. Baselines do
// all their work in the latency-critical phase.
enum class Phase : uint8_t { latency_critical, preprocessing, overall };

std::string_view phase_name(Phase phase);

struct BenchConfig {
    std::vector<std::string> schemes = {"bpmac", "hmac-sha256", "aes-cmac"};
    std::vector<unsigned> msg_lens = default_msg_lens();  // bytes
    std::vector<unsigned> tag_lens = {4, 8, 12, 16};      // bytes
    uint64_t iterations = 100;  // minimum tag computations per timer read
    unsigned repetitions = 30;  // timed measurements per point
    unsigned warmup_batches = 1;
    SignMode mode = SignMode::branchy;
    uint64_t seed = 0x9e3779b97f4a7c15ull;  // keys + message content

    static std::vector<unsigned> default_msg_lens();  // 1..32

    // Throws std::invalid_argument on out-of-range fields or an unknown
    // scheme name.
    void validate() const;
};

struct BenchPoint {
    std::string scheme;
    unsigned msg_len = 0;
    unsigned tag_len = 0;
    Phase phase = Phase::latency_critical;
    double mean_ns = 0;
    double ci99_low_ns = 0;
    double ci99_high_ns = 0;
    // Median of the repetition samples: robust against one-sided scheduler
    // interference, so shape comparisons across points use this. Reports
    // keep the mean/CI columns.
    double median_ns = 0;
};

struct LatencyBenchResult {
    std::vector<BenchPoint> points;

    // First matching point, if any.
    const BenchPoint* find(std::string_view scheme, unsigned msg_len, unsigned tag_len,
                           Phase phase) const;
};

// Single-threaded by design; run one harness per process for timing
// fidelity. Repetitions are interleaved round-robin across all measurement
// points so that machine-wide slowdowns land on every point instead of
// biasing whichever one was being timed.
LatencyBenchResult run_latency_bench(const BenchConfig& config);

// ---- analytic memory model --------------------------------------------------

struct MemoryCurvePoint {
    unsigned tag_len = 0;
    unsigned msg_len = 0;
    uint64_t footprint_bytes = 0;  // (8M + 3) * L
};

// Where the footprint curve for one tag length crosses a baseline band:
// the first message length whose footprint reaches the band (>= low) and the
// first that leaves it upward (> high). A scheme-vs-baseline tipoff point
// falls between the two.
struct MemoryCrossover {
    unsigned tag_len = 0;
    std::optional<unsigned> first_len_in_band;
    std::optional<unsigned> first_len_above_band;
};

struct MemoryModelResult {
    uint64_t band_low = 0;
    uint64_t band_high = 0;
    std::vector<MemoryCurvePoint> curves;
    std::vector<MemoryCrossover> crossovers;
};

// Evaluates the footprint model over [msg_len_min, msg_len_max] for each tag
// length against a baseline footprint band [band_low, band_high].
MemoryModelResult run_memory_model(std::span<const unsigned> tag_lens, unsigned msg_len_min,
                                   unsigned msg_len_max, uint64_t band_low, uint64_t band_high);

// ---- reports ----------------------------------------------------------------

enum class ReportFormat : uint8_t { csv, json, plot_data };

ReportFormat parse_report_format(std::string_view name);  // throws std::invalid_argument

// Writes the given results (either may be null) under out_dir and returns
// the paths written. CSV columns for latency are fixed:
//   scheme,msg_len,tag_len,phase,mean_ns,ci99_low_ns,ci99_high_ns
// Throws IoError when the directory or a file cannot be written.
std::vector<std::filesystem::path> emit_report(const LatencyBenchResult* latency,
                                               const MemoryModelResult* memory,
                                               ReportFormat format,
                                               const std::filesystem::path& out_dir);

// ---- timing internals (exposed for tests) -----------------------------------

// Measured tick size of the monotonic clock, in ns.
double timer_granularity_ns();

// Doubles the batch size starting at min_iters until one run_batch(iters)
// call spans at least 100 clock ticks. Throws when no reasonable batch size
// achieves that.
uint64_t tune_batch(const std::function<void(uint64_t)>& run_batch, uint64_t min_iters);

}  // namespace bpmac
