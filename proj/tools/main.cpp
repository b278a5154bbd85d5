// bpmac command-line tool: key management, table precomputation, sign/verify,
// test-vector generation, benchmarks, and an authenticated-datagram demo.
//
// Exit codes: 0 success / tag accepted, 1 tag rejected, 2 usage error,
// 3 I/O or format error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bpmac/bench.hpp"
#include "bpmac/bytes.hpp"
#include "bpmac/errors.hpp"
#include "bpmac/mac.hpp"
#include "bpmac/oracle.hpp"
#include "demo.hpp"

namespace {

using namespace bpmac;

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return data;
}

void write_file(const std::string& path, std::span<const uint8_t> data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

struct Options {
    std::string key_path;
    std::string table_path;
    std::string in_path;
    std::string out_path;
    std::string msg_hex;
    std::string tag_hex;
    std::string format = "csv";
    std::string endpoint;
    std::string role;
    unsigned tag_len = 16;
    unsigned max_len = 0;
    uint64_t nonce = 0;
    uint64_t count = 100;
    uint64_t seed = 1;
    uint64_t iterations = 100;
    unsigned repetitions = 30;
    bool mem_only = false;
    bool constant_time = false;
    bool max_len_set = false;
    bool tag_len_set = false;
};

KeyMaterial load_keys(const std::string& path) {
    return KeyMaterial::from_bytes(read_file(path));
}

std::vector<uint8_t> parse_msg_hex(const std::string& hex) {
    try {
        return from_hex(hex);
    } catch (const FormatError& e) {
        throw std::invalid_argument(std::string("--msg: ") + e.what());
    }
}

std::vector<uint8_t> get_message(const Options& opts) {
    if (!opts.msg_hex.empty() && !opts.in_path.empty())
        throw std::invalid_argument("give either --msg or --in, not both");
    if (!opts.in_path.empty()) return read_file(opts.in_path);
    return parse_msg_hex(opts.msg_hex);
}

// Loads --table (checking it against the key and any explicit params) or
// builds one from --max-len/--tag-len.
PrecomputedTable resolve_table(const Options& opts, const KeyMaterial& keys) {
    if (!opts.table_path.empty()) {
        PrecomputedTable table = deserialize_table(read_file(opts.table_path));
        Aes128 k1_cipher(keys.k1);
        if (table.key_id() != table_key_id(k1_cipher))
            throw FormatError("table " + opts.table_path + " does not match the key");
        if (opts.max_len_set && table.params().max_msg_len != opts.max_len)
            throw std::invalid_argument("--max-len disagrees with the table");
        if (opts.tag_len_set && table.params().tag_len != opts.tag_len)
            throw std::invalid_argument("--tag-len disagrees with the table");
        return table;
    }
    if (!opts.max_len_set)
        throw std::invalid_argument("need --table, or --max-len and --tag-len");
    MacParams params{uint8_t(opts.tag_len), uint16_t(opts.max_len)};
    params.validate();
    return build_table(keys.k1, params);
}

int cmd_keygen(const Options& opts) {
    const KeyMaterial keys = generate_keys();
    write_file(opts.out_path, keys.to_bytes());
    std::printf("wrote %s (32 bytes, k1 || k2)\n", opts.out_path.c_str());
    return 0;
}

int cmd_precompute(const Options& opts) {
    const KeyMaterial keys = load_keys(opts.key_path);
    MacParams params{uint8_t(opts.tag_len), uint16_t(opts.max_len)};
    params.validate();
    const PrecomputedTable table = build_table(keys.k1, params);
    const auto blob = serialize_table(table);
    write_file(opts.out_path, blob);
    std::printf("wrote %s: M=%u L=%u, %zu bytes (%u bitflip entries; "
                "raw per-bit tag storage would be %zu bytes)\n",
                opts.out_path.c_str(), unsigned(params.max_msg_len), unsigned(params.tag_len),
                blob.size(), table.bit_count(), naive_bit_tag_storage(params));
    return 0;
}

int cmd_sign(const Options& opts) {
    const KeyMaterial keys = load_keys(opts.key_path);
    const PrecomputedTable table = resolve_table(opts, keys);
    const auto msg = get_message(opts);

    Aes128 k2_cipher(keys.k2);
    MaskingCache cache;
    const SignMode mode = opts.constant_time ? SignMode::constant_time : SignMode::branchy;
    const Tag tag = sign(table, k2_cipher, cache, msg, opts.nonce, mode);
    std::printf("%s %llu\n", tag.hex().c_str(), (unsigned long long)opts.nonce);
    return 0;
}

int cmd_verify(const Options& opts) {
    const KeyMaterial keys = load_keys(opts.key_path);
    const PrecomputedTable table = resolve_table(opts, keys);
    const auto msg = get_message(opts);

    Tag tag;
    try {
        tag = Tag::from_hex(opts.tag_hex);
    } catch (const FormatError& e) {
        throw std::invalid_argument(std::string("--tag: ") + e.what());
    }

    Aes128 k2_cipher(keys.k2);
    MaskingCache cache;
    const SignMode mode = opts.constant_time ? SignMode::constant_time : SignMode::branchy;
    if (verify(table, k2_cipher, cache, msg, opts.nonce, tag, mode)) {
        std::printf("accept\n");
        return 0;
    }
    std::printf("reject\n");
    return 1;
}

int cmd_vectors(const Options& opts) {
    const KeyMaterial keys = load_keys(opts.key_path);
    MacParams params{uint8_t(opts.tag_len), uint16_t(opts.max_len)};
    params.validate();

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!opts.out_path.empty()) {
        file.open(opts.out_path);
        if (!file) throw IoError("cannot write " + opts.out_path);
        out = &file;
    }

    std::mt19937_64 rng(opts.seed);
    for (uint64_t i = 0; i < opts.count; ++i) {
        std::vector<uint8_t> msg(rng() % (params.max_msg_len + 1u));
        for (auto& b : msg) b = uint8_t(rng());
        const uint64_t nonce = rng();
        const Tag tag = sign_naive(keys, params, msg, nonce);
        *out << to_hex(msg) << ',' << nonce << ',' << tag.hex() << '\n';
    }
    out->flush();
    if (!*out) throw IoError("write failed: " + opts.out_path);
    return 0;
}

int cmd_demo(const Options& opts) {
    const KeyMaterial keys = load_keys(opts.key_path);
    const PrecomputedTable table = resolve_table(opts, keys);
    const cli::Endpoint endpoint = cli::parse_endpoint(opts.endpoint);
    if (opts.role == "recv") return cli::run_demo_recv(table, keys.k2, endpoint, opts.count);
    return cli::run_demo_send(table, keys.k2, endpoint, opts.count, opts.seed);
}

int cmd_bench(const Options& opts) {
    const ReportFormat format = parse_report_format(opts.format);
    const std::filesystem::path out_dir = opts.out_path.empty() ? "bench-out" : opts.out_path;

    // Footprint model against a conventional MAC's working-set band
    // (~1.4 kB to 1.6 kB across tag lengths).
    const std::vector<unsigned> mem_tag_lens = {4, 8, 12, 16};
    const MemoryModelResult memory = run_memory_model(mem_tag_lens, 1, 64, 1350, 1600);

    std::optional<LatencyBenchResult> latency;
    if (!opts.mem_only) {
        BenchConfig config;
        config.iterations = opts.iterations;
        config.repetitions = opts.repetitions;
        config.mode = opts.constant_time ? SignMode::constant_time : SignMode::branchy;
        config.validate();
        std::printf("running latency benchmark (%zu schemes, %zu msg lens, %zu tag lens, "
                    "%u repetitions)...\n",
                    config.schemes.size(), config.msg_lens.size(), config.tag_lens.size(),
                    config.repetitions);
        std::fflush(stdout);
        latency = run_latency_bench(config);
    }

    const auto written =
        emit_report(latency ? &*latency : nullptr, &memory, format, out_dir);
    for (const auto& path : written) std::printf("wrote %s\n", path.c_str());

    for (const auto& cross : memory.crossovers) {
        std::printf("memory model: L=%-2u first footprint in band [%llu,%llu] at M=%s, "
                    "above at M=%s\n",
                    cross.tag_len, (unsigned long long)memory.band_low,
                    (unsigned long long)memory.band_high,
                    cross.first_len_in_band ? std::to_string(*cross.first_len_in_band).c_str()
                                            : "-",
                    cross.first_len_above_band
                        ? std::to_string(*cross.first_len_above_band).c_str()
                        : "-");
    }

    if (latency) {
        const BenchPoint* fast =
            latency->find("bpmac", 1, 16, Phase::latency_critical);
        const BenchPoint* base =
            latency->find("hmac-sha256", 1, 16, Phase::latency_critical);
        if (fast && base)
            std::printf("1-byte msg, 16-byte tag: bpmac latency-critical %.1f ns vs "
                        "hmac-sha256 %.1f ns\n",
                        fast->mean_ns, base->mean_ns);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BP-MAC: bitwise-precomputed message authentication"};
    app.require_subcommand(1);

    Options opts;

    auto* keygen = app.add_subcommand("keygen", "Generate a 32-byte key file (k1 || k2)");
    keygen->add_option("--out", opts.out_path, "Key file to write")->required();

    auto* precompute =
        app.add_subcommand("precompute", "Build and serialize a bit-tag table for a key");
    precompute->add_option("--key", opts.key_path, "Key file")->required();
    precompute->add_option("--max-len", opts.max_len, "Maximum message length M in bytes")
        ->required()
        ->check(CLI::Range(1, 65535));
    precompute->add_option("--tag-len", opts.tag_len, "Tag length L in bytes")
        ->required()
        ->check(CLI::Range(1, 16));
    precompute->add_option("--out", opts.out_path, "Table file to write")->required();

    auto add_sign_like = [&](CLI::App* cmd) {
        cmd->add_option("--key", opts.key_path, "Key file")->required();
        cmd->add_option("--table", opts.table_path, "Precomputed table file");
        cmd->add_option("--max-len", opts.max_len, "Maximum message length M (when no --table)")
            ->check(CLI::Range(1, 65535));
        cmd->add_option("--tag-len", opts.tag_len, "Tag length L (when no --table)")
            ->check(CLI::Range(1, 16));
        cmd->add_option("--msg", opts.msg_hex, "Message as hex (may be empty)");
        cmd->add_option("--in", opts.in_path, "Read message bytes from file");
        cmd->add_option("--nonce", opts.nonce, "Nonce (decimal)")->required();
        cmd->add_flag("--constant-time", opts.constant_time,
                      "Constant-time table scan (same tags, no data-dependent branches)");
    };

    auto* sign_cmd = app.add_subcommand("sign", "Compute a tag; prints '<tag-hex> <nonce>'");
    add_sign_like(sign_cmd);

    auto* verify_cmd =
        app.add_subcommand("verify", "Check a tag; exit 0 = accept, 1 = reject");
    add_sign_like(verify_cmd);
    verify_cmd->add_option("--tag", opts.tag_hex, "Expected tag as hex")->required();

    auto* vectors = app.add_subcommand(
        "vectors", "Emit 'msg_hex,nonce,tag_hex' lines from the naive reference path");
    vectors->add_option("--key", opts.key_path, "Key file")->required();
    vectors->add_option("--max-len", opts.max_len, "Maximum message length M")
        ->required()
        ->check(CLI::Range(1, 65535));
    vectors->add_option("--tag-len", opts.tag_len, "Tag length L")
        ->required()
        ->check(CLI::Range(1, 16));
    vectors->add_option("--count", opts.count, "Number of vectors");
    vectors->add_option("--seed", opts.seed, "PRNG seed");
    vectors->add_option("--out", opts.out_path, "Output file (default stdout)");

    auto* demo = app.add_subcommand(
        "demo", "Authenticated datagrams over UDP loopback with replay protection");
    demo->add_option("--role", opts.role, "send or recv")
        ->required()
        ->check(CLI::IsMember({"send", "recv"}));
    demo->add_option("--endpoint", opts.endpoint, "host:port (port 0 = pick one)")->required();
    demo->add_option("--key", opts.key_path, "Key file")->required();
    demo->add_option("--table", opts.table_path, "Precomputed table file");
    demo->add_option("--max-len", opts.max_len, "Maximum message length M (when no --table)")
        ->check(CLI::Range(1, 65535));
    demo->add_option("--tag-len", opts.tag_len, "Tag length L (when no --table)")
        ->check(CLI::Range(1, 16));
    demo->add_option("--count", opts.count, "Datagrams to send / receive");
    demo->add_option("--seed", opts.seed, "Sender payload seed");

    auto* bench = app.add_subcommand("bench", "Latency benchmark and memory-footprint model");
    bench->add_option("--out", opts.out_path, "Report directory (default bench-out)");
    bench->add_option("--format", opts.format, "csv, json, or plot-data")
        ->check(CLI::IsMember({"csv", "json", "plot-data"}));
    bench->add_option("--iterations", opts.iterations, "Minimum tag computations per timer read");
    bench->add_option("--repetitions", opts.repetitions, "Timed measurements per point");
    bench->add_flag("--mem-only", opts.mem_only, "Skip latency runs; memory model only");
    bench->add_flag("--constant-time", opts.constant_time, "Bench the constant-time signing mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    opts.max_len_set = precompute->count("--max-len") || sign_cmd->count("--max-len") ||
                       verify_cmd->count("--max-len") || vectors->count("--max-len") ||
                       demo->count("--max-len");
    opts.tag_len_set = precompute->count("--tag-len") || sign_cmd->count("--tag-len") ||
                       verify_cmd->count("--tag-len") || vectors->count("--tag-len") ||
                       demo->count("--tag-len");

    try {
        if (*keygen) return cmd_keygen(opts);
        if (*precompute) return cmd_precompute(opts);
        if (*sign_cmd) return cmd_sign(opts);
        if (*verify_cmd) return cmd_verify(opts);
        if (*vectors) return cmd_vectors(opts);
        if (*demo) return cmd_demo(opts);
        if (*bench) return cmd_bench(opts);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
