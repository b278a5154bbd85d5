#include "bpmac/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <random>
#include <stdexcept>

#include "bpmac/baseline.hpp"
#include "bpmac/errors.hpp"
#include "bpmac/stats.hpp"

namespace bpmac {

namespace {

using bench_clock = std::chrono::steady_clock;

inline double elapsed_ns(bench_clock::time_point t0, bench_clock::time_point t1) {
    return double(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

// Keeps the compiler from discarding a computed tag inside timing loops.
inline void consume(const Tag& tag) {
    asm volatile("" : : "g"(tag.bytes().data()) : "memory");
}

// One measurement point: a timing closure plus whatever state it mutates.
// The closure owns its state through shared_ptr captures; `measured` rows
// collect one sample per interleaved repetition pass.
struct PointRun {
    std::string scheme;
    unsigned msg_len = 0;
    unsigned tag_len = 0;
    Phase phase = Phase::latency_critical;
    std::function<void(uint64_t)> run;  // empty for synthetic zero rows
    uint64_t iters = 0;
    std::vector<double> samples;
};

double median_of(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const size_t n = samples.size();
    return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

KeyMaterial deterministic_keys(uint64_t seed) {
    std::mt19937_64 rng(seed);
    PrfKey k1, k2;
    for (auto& b : k1.bytes) b = uint8_t(rng());
    do {
        for (auto& b : k2.bytes) b = uint8_t(rng());
    } while (k2 == k1);
    return {k1, k2};
}

std::vector<uint8_t> deterministic_message(uint64_t seed, size_t len) {
    std::mt19937_64 rng(seed ^ 0xa5a5a5a5a5a5a5a5ull);
    std::vector<uint8_t> msg(len);
    for (auto& b : msg) b = uint8_t(rng());
    return msg;
}

void plan_bpmac(const BenchConfig& cfg, const KeyMaterial& keys,
                std::shared_ptr<const std::vector<uint8_t>> msg_buf,
                std::vector<PointRun>& plan) {
    const unsigned max_len = *std::max_element(cfg.msg_lens.begin(), cfg.msg_lens.end());
    auto k2_cipher = std::make_shared<Aes128>(keys.k2);

    for (unsigned tag_len : cfg.tag_lens) {
        MacParams params{uint8_t(tag_len), uint16_t(std::max(max_len, 1u))};
        auto table = std::make_shared<const PrecomputedTable>(build_table(keys.k1, params));

        for (unsigned msg_len : cfg.msg_lens) {
            const SignMode mode = cfg.mode;

            {
                // Latency-critical: warm cache, fixed nonce; table scan + XORs
                // only, no cipher call inside the timed region.
                auto cache = std::make_shared<MaskingCache>();
                const uint64_t nonce = 42;
                masking_tag(*k2_cipher, nonce, tag_len, *cache);
                plan.push_back(
                    {"bpmac", msg_len, tag_len, Phase::latency_critical,
                     [table, k2_cipher, cache, msg_buf, msg_len, nonce, mode](uint64_t iters) {
                         const std::span<const uint8_t> msg(msg_buf->data(), msg_len);
                         for (uint64_t i = 0; i < iters; ++i)
                             consume(sign(*table, *k2_cipher, *cache, msg, nonce, mode));
                     },
                     0,
                     {}});
            }
            {
                // Preprocessing: per-tag masking cost over advancing nonces;
                // one cipher call per floor(16/L) tags, amortized.
                auto cache = std::make_shared<MaskingCache>();
                auto nonce = std::make_shared<uint64_t>(0);
                plan.push_back({"bpmac", msg_len, tag_len, Phase::preprocessing,
                                [k2_cipher, cache, nonce, tag_len](uint64_t iters) {
                                    for (uint64_t i = 0; i < iters; ++i)
                                        consume(masking_tag(*k2_cipher, (*nonce)++, tag_len,
                                                            *cache));
                                },
                                0,
                                {}});
            }
            {
                // Overall recurring cost per tag: masking plus scan.
                auto cache = std::make_shared<MaskingCache>();
                auto nonce = std::make_shared<uint64_t>(0);
                plan.push_back(
                    {"bpmac", msg_len, tag_len, Phase::overall,
                     [table, k2_cipher, cache, nonce, msg_buf, msg_len, mode](uint64_t iters) {
                         const std::span<const uint8_t> msg(msg_buf->data(), msg_len);
                         for (uint64_t i = 0; i < iters; ++i)
                             consume(sign(*table, *k2_cipher, *cache, msg, (*nonce)++, mode));
                     },
                     0,
                     {}});
            }
        }
    }
}

void plan_baseline(const BenchConfig& cfg, const std::string& scheme, const KeyMaterial& keys,
                   std::shared_ptr<const std::vector<uint8_t>> msg_buf,
                   std::vector<PointRun>& plan) {
    for (unsigned tag_len : cfg.tag_lens) {
        std::shared_ptr<BaselineMac> mac;
        if (scheme == "hmac-sha256")
            mac = std::make_shared<HmacSha256Mac>(std::span<const uint8_t>(keys.k1.bytes),
                                                  tag_len);
        else
            mac = std::make_shared<AesCmacMac>(keys.k1, tag_len);

        for (unsigned msg_len : cfg.msg_lens) {
            // The whole computation sits in the latency-critical phase; the
            // overall row repeats it and preprocessing is identically zero.
            for (const Phase phase : {Phase::latency_critical, Phase::overall}) {
                auto nonce = std::make_shared<uint64_t>(0);
                plan.push_back({scheme, msg_len, tag_len, phase,
                                [mac, nonce, msg_buf, msg_len](uint64_t iters) {
                                    const std::span<const uint8_t> msg(msg_buf->data(), msg_len);
                                    for (uint64_t i = 0; i < iters; ++i)
                                        consume(mac->sign(msg, (*nonce)++));
                                },
                                0,
                                {}});
            }
            plan.push_back({scheme, msg_len, tag_len, Phase::preprocessing, nullptr, 0, {}});
        }
    }
}

std::string format_ns(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string_view phase_name(Phase phase) {
    switch (phase) {
        case Phase::latency_critical: return "latency-critical";
        case Phase::preprocessing: return "preprocessing";
        case Phase::overall: return "overall";
    }
    return "unknown";
}

std::vector<unsigned> BenchConfig::default_msg_lens() {
    std::vector<unsigned> lens(32);
    for (unsigned i = 0; i < 32; ++i) lens[i] = i + 1;
    return lens;
}

void BenchConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (repetitions < 2) throw std::invalid_argument("repetitions must be >= 2");
    if (schemes.empty()) throw std::invalid_argument("no schemes selected");
    for (const auto& s : schemes)
        if (s != "bpmac" && s != "hmac-sha256" && s != "aes-cmac")
            throw std::invalid_argument("unknown scheme: " + s);
    if (msg_lens.empty()) throw std::invalid_argument("no message lengths selected");
    for (unsigned len : msg_lens)
        if (len > 0xffff) throw std::invalid_argument("message length out of range");
    if (tag_lens.empty()) throw std::invalid_argument("no tag lengths selected");
    for (unsigned tl : tag_lens)
        if (tl < 1 || tl > 16) throw std::invalid_argument("tag length must be in [1,16]");
}

const BenchPoint* LatencyBenchResult::find(std::string_view scheme, unsigned msg_len,
                                           unsigned tag_len, Phase phase) const {
    for (const auto& p : points)
        if (p.scheme == scheme && p.msg_len == msg_len && p.tag_len == tag_len && p.phase == phase)
            return &p;
    return nullptr;
}

double timer_granularity_ns() {
    static const double granularity = [] {
        double best = 1e9;
        for (int trial = 0; trial < 64; ++trial) {
            auto t0 = bench_clock::now();
            auto t1 = bench_clock::now();
            while (t1 == t0) t1 = bench_clock::now();
            best = std::min(best, elapsed_ns(t0, t1));
        }
        return std::max(best, 1.0);
    }();
    return granularity;
}

uint64_t tune_batch(const std::function<void(uint64_t)>& run_batch, uint64_t min_iters) {
    const double target_ns = 100.0 * timer_granularity_ns();
    uint64_t iters = std::max<uint64_t>(min_iters, 1);
    for (;;) {
        auto t0 = bench_clock::now();
        run_batch(iters);
        auto t1 = bench_clock::now();
        if (elapsed_ns(t0, t1) >= target_ns) return iters;
        if (iters >= (uint64_t(1) << 32))
            throw std::runtime_error("timer resolution too coarse even after batching");
        iters *= 2;
    }
}

LatencyBenchResult run_latency_bench(const BenchConfig& config) {
    config.validate();

    const KeyMaterial keys = deterministic_keys(config.seed);
    const unsigned max_len = *std::max_element(config.msg_lens.begin(), config.msg_lens.end());
    auto msg_buf = std::make_shared<const std::vector<uint8_t>>(
        deterministic_message(config.seed, std::max(max_len, 1u)));

    std::vector<PointRun> plan;
    for (const auto& scheme : config.schemes) {
        if (scheme == "bpmac")
            plan_bpmac(config, keys, msg_buf, plan);
        else
            plan_baseline(config, scheme, keys, msg_buf, plan);
    }

    for (PointRun& point : plan) {
        if (!point.run) continue;
        point.iters = tune_batch(point.run, config.iterations);
        for (unsigned w = 0; w < config.warmup_batches; ++w) point.run(point.iters);
        point.samples.reserve(config.repetitions);
    }

    // Interleaved passes, one sample per point per pass, visiting points in a
    // fresh random order each time so periodic machine noise cannot line up
    // with any particular point.
    std::vector<size_t> order(plan.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 shuffle_rng(config.seed ^ 0xdecafbadull);
    for (unsigned rep = 0; rep < config.repetitions; ++rep) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (size_t index : order) {
            PointRun& point = plan[index];
            if (!point.run) continue;
            auto t0 = bench_clock::now();
            point.run(point.iters);
            auto t1 = bench_clock::now();
            point.samples.push_back(elapsed_ns(t0, t1) / double(point.iters));
        }
    }

    LatencyBenchResult result;
    result.points.reserve(plan.size());
    for (PointRun& point : plan) {
        BenchPoint row{point.scheme, point.msg_len, point.tag_len, point.phase, 0, 0, 0, 0};
        if (point.run) {
            const Summary s = summarize99(point.samples);
            row.mean_ns = s.mean;
            row.ci99_low_ns = s.ci99_low;
            row.ci99_high_ns = s.ci99_high;
            row.median_ns = median_of(std::move(point.samples));
        }
        result.points.push_back(std::move(row));
    }
    return result;
}

MemoryModelResult run_memory_model(std::span<const unsigned> tag_lens, unsigned msg_len_min,
                                   unsigned msg_len_max, uint64_t band_low, uint64_t band_high) {
    if (band_low > band_high) throw std::invalid_argument("band low must be <= band high");
    if (msg_len_min < 1 || msg_len_min > msg_len_max)
        throw std::invalid_argument("invalid message length range");

    MemoryModelResult result;
    result.band_low = band_low;
    result.band_high = band_high;

    for (unsigned tag_len : tag_lens) {
        if (tag_len < 1 || tag_len > 16)
            throw std::invalid_argument("tag length must be in [1,16]");
        MemoryCrossover cross;
        cross.tag_len = tag_len;
        for (unsigned m = msg_len_min; m <= msg_len_max; ++m) {
            const uint64_t fp = memory_footprint(MacParams{uint8_t(tag_len), uint16_t(m)});
            result.curves.push_back({tag_len, m, fp});
            if (!cross.first_len_in_band && fp >= band_low) cross.first_len_in_band = m;
            if (!cross.first_len_above_band && fp > band_high) cross.first_len_above_band = m;
        }
        result.crossovers.push_back(cross);
    }
    return result;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    if (name == "plot-data") return ReportFormat::plot_data;
    throw std::invalid_argument("unknown report format: " + std::string(name));
}

std::vector<std::filesystem::path> emit_report(const LatencyBenchResult* latency,
                                               const MemoryModelResult* memory,
                                               ReportFormat format,
                                               const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    std::vector<std::filesystem::path> written;

    if (format == ReportFormat::csv) {
        if (latency) {
            auto path = out_dir / "latency.csv";
            auto out = open_out(path);
            out << "scheme,msg_len,tag_len,phase,mean_ns,ci99_low_ns,ci99_high_ns\n";
            for (const auto& p : latency->points)
                out << p.scheme << ',' << p.msg_len << ',' << p.tag_len << ','
                    << phase_name(p.phase) << ',' << format_ns(p.mean_ns) << ','
                    << format_ns(p.ci99_low_ns) << ',' << format_ns(p.ci99_high_ns) << '\n';
            finish_out(out, path);
            written.push_back(path);
        }
        if (memory) {
            auto curves_path = out_dir / "memory_curves.csv";
            auto out = open_out(curves_path);
            out << "tag_len,msg_len,footprint_bytes\n";
            for (const auto& c : memory->curves)
                out << c.tag_len << ',' << c.msg_len << ',' << c.footprint_bytes << '\n';
            finish_out(out, curves_path);
            written.push_back(curves_path);

            auto cross_path = out_dir / "memory_crossover.csv";
            auto cout_ = open_out(cross_path);
            cout_ << "tag_len,band_low,band_high,first_msg_len_in_band,first_msg_len_above_band\n";
            for (const auto& c : memory->crossovers) {
                cout_ << c.tag_len << ',' << memory->band_low << ',' << memory->band_high << ',';
                if (c.first_len_in_band) cout_ << *c.first_len_in_band;
                cout_ << ',';
                if (c.first_len_above_band) cout_ << *c.first_len_above_band;
                cout_ << '\n';
            }
            finish_out(cout_, cross_path);
            written.push_back(cross_path);
        }
    } else if (format == ReportFormat::json) {
        using nlohmann::json;
        if (latency) {
            json doc;
            doc["points"] = json::array();
            for (const auto& p : latency->points)
                doc["points"].push_back({{"scheme", p.scheme},
                                         {"msg_len", p.msg_len},
                                         {"tag_len", p.tag_len},
                                         {"phase", phase_name(p.phase)},
                                         {"mean_ns", p.mean_ns},
                                         {"ci99_low_ns", p.ci99_low_ns},
                                         {"ci99_high_ns", p.ci99_high_ns}});
            auto path = out_dir / "latency.json";
            auto out = open_out(path);
            out << doc.dump(2) << '\n';
            finish_out(out, path);
            written.push_back(path);
        }
        if (memory) {
            json doc;
            doc["band_low"] = memory->band_low;
            doc["band_high"] = memory->band_high;
            doc["curves"] = json::array();
            for (const auto& c : memory->curves)
                doc["curves"].push_back({{"tag_len", c.tag_len},
                                         {"msg_len", c.msg_len},
                                         {"footprint_bytes", c.footprint_bytes}});
            doc["crossovers"] = json::array();
            for (const auto& c : memory->crossovers) {
                json row{{"tag_len", c.tag_len}};
                row["first_msg_len_in_band"] =
                    c.first_len_in_band ? json(*c.first_len_in_band) : json(nullptr);
                row["first_msg_len_above_band"] =
                    c.first_len_above_band ? json(*c.first_len_above_band) : json(nullptr);
                doc["crossovers"].push_back(row);
            }
            auto path = out_dir / "memory.json";
            auto out = open_out(path);
            out << doc.dump(2) << '\n';
            finish_out(out, path);
            written.push_back(path);
        }
    } else {
        if (latency) {
            auto path = out_dir / "latency.dat";
            auto out = open_out(path);
            // One block per (scheme, tag_len, phase) series: msg_len mean_ns.
            for (const auto& first : latency->points) {
                bool already_done = false;
                for (const auto& p : latency->points) {
                    if (&p == &first) break;
                    if (p.scheme == first.scheme && p.tag_len == first.tag_len &&
                        p.phase == first.phase) {
                        already_done = true;
                        break;
                    }
                }
                if (already_done) continue;
                out << "# scheme=" << first.scheme << " tag_len=" << first.tag_len
                    << " phase=" << phase_name(first.phase) << '\n';
                for (const auto& p : latency->points)
                    if (p.scheme == first.scheme && p.tag_len == first.tag_len &&
                        p.phase == first.phase)
                        out << p.msg_len << ' ' << format_ns(p.mean_ns) << '\n';
                out << '\n';
            }
            finish_out(out, path);
            written.push_back(path);
        }
        if (memory) {
            auto path = out_dir / "memory.dat";
            auto out = open_out(path);
            for (const auto& cross : memory->crossovers) {
                out << "# tag_len=" << cross.tag_len << " band=[" << memory->band_low << ','
                    << memory->band_high << "]\n";
                for (const auto& c : memory->curves)
                    if (c.tag_len == cross.tag_len)
                        out << c.msg_len << ' ' << c.footprint_bytes << '\n';
                out << '\n';
            }
            finish_out(out, path);
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace bpmac
