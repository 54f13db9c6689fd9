// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
//
// Command-line harness: construction, verification, channel simulation,
// and bound tables, all reproducible from explicit seeds.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamcode/analysis.hpp"
#include "streamcode/channels.hpp"
#include "streamcode/errors.hpp"
#include "streamcode/layered.hpp"
#include "streamcode/lincode.hpp"
#include "streamcode/numeric.hpp"
#include "streamcode/rng.hpp"
#include "streamcode/subsetcode.hpp"

namespace {

using namespace streamcode;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitDomain = 2;
constexpr int kExitExhausted = 3;
constexpr int kExitScale = 4;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

struct BoundsRow {
    double eps;
    double construction_rate;   // 1 - 4*sqrt(eps*log2(1/eps))
    double linear_upper;        // 1 - sqrt(eps)
    double improved_rate_form;  // 1 - sqrt(eps*log2(log2(1/eps)))
    double random_error_rate;   // 1 - H(3*eps)
    double subset_delta;        // 2*sqrt(eps/log2(log2(1/eps)))
    double subset_alpha;        // 1/(ell+1) with ell = log2(1/eps)/sqrt(log2(log2(1/eps)))
    double t_exp_general;
    double t_exp_greedy;
    double t_exp_linear;
    bool greedy_regime;
};

BoundsRow bounds_row(double eps) {
    if (!(eps > 0.0 && eps < 1.0 / 17.0)) throw DomainError("bounds requires eps in (0, 1/17)");
    BoundsRow row{};
    row.eps = eps;
    const double lg = std::log2(1.0 / eps);
    const double lglg = std::log2(lg);
    row.construction_rate = 1.0 - 4.0 * std::sqrt(eps * lg);
    row.linear_upper = 1.0 - std::sqrt(eps);
    row.improved_rate_form = 1.0 - std::sqrt(eps * lglg);
    row.random_error_rate = 1.0 - binary_entropy(std::min(1.0, 3.0 * eps));
    row.subset_delta = 2.0 * std::sqrt(eps / lglg);
    const double ell = lg / std::sqrt(lglg);
    row.subset_alpha = 1.0 / (ell + 1.0);
    row.t_exp_general = subsetcode::impossibility_exponent(row.subset_alpha, row.subset_delta);
    row.t_exp_greedy = subsetcode::greedy_exponent(row.subset_alpha, row.subset_delta);
    row.t_exp_linear = row.subset_delta < row.subset_alpha
                           ? subsetcode::linear_subset_bound_exponent(row.subset_alpha,
                                                                      row.subset_delta)
                           : 0.0;
    row.greedy_regime = subsetcode::greedy_regime_ok(row.subset_alpha, row.subset_delta);
    return row;
}

std::shared_ptr<const subsetcode::SubsetCode> load_subset_file(const std::string& path) {
    return std::make_shared<subsetcode::SubsetCode>(subsetcode::SubsetCode::parse(read_file(path)));
}

int report_exit(const VerificationReport& report) {
    std::cout << report.describe() << "\n";
    return report.passed ? 0 : kExitVerifyFailed;
}

// ---- construct ------------------------------------------------------

struct ConstructLinearArgs {
    double eps = 0.0, rate = 0.0, tau = 0.0;
    std::size_t k0 = 0, n = 0, max_attempts = 200;
    std::uint64_t seed = 0, cap = kDefaultWorkCap;
    std::string out;
};

int run_construct_linear(const ConstructLinearArgs& a) {
    lincode::LinearCodePlan plan{a.eps, a.rate, a.tau, a.k0, a.n, a.seed};
    plan.validate();
    // The margin is a sufficient condition only; when the entropy ratio
    // leaves its domain we still let rejection sampling try its luck.
    std::string margin_text = "undefined (eps/(1-R/tau) >= 1)";
    try {
        margin_text = fmt(lincode::feasibility_margin(a.eps, a.rate, a.tau));
    } catch (const DomainError&) {
    }
    const auto result = lincode::construct_with_retries(plan, a.max_attempts, a.cap);
    if (!a.out.empty()) write_file(a.out, result.schedule.serialize());
    std::cout << "constructed: linear eps=" << a.eps << " R=" << a.rate << " tau=" << a.tau
              << " k0=" << a.k0 << " n=" << a.n << " seed=" << a.seed << "\n"
              << "feasibility_margin=" << margin_text << "\n"
              << "attempts=" << result.attempts << "\n"
              << "verification: PASSED\n";
    return 0;
}

struct ConstructSubsetArgs {
    std::size_t n = 0, k = 0, cap = 1024;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::string method = "greedy", out;
};

int run_construct_subset(const ConstructSubsetArgs& a) {
    std::optional<subsetcode::SubsetCode> code;
    if (a.method == "greedy") {
        code = subsetcode::greedy_construct(a.n, a.k, a.delta, a.seed, a.cap);
    } else if (a.method == "trivial") {
        code = subsetcode::trivial_two_set(a.n, a.delta);
    } else {
        throw DomainError("unknown subset method: " + a.method);
    }
    const auto report = subsetcode::verify_subset_distance(*code);
    if (!a.out.empty()) write_file(a.out, code->serialize());
    std::cout << "constructed: subset K=" << code->params().K << " T=" << code->params().T
              << " delta=" << code->params().delta << " n=" << code->params().n << "\n";
    return report_exit(report);
}

struct ConstructChecksumArgs {
    std::size_t len = 0, max_attempts = 100;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_construct_checksum(const ConstructChecksumArgs& a) {
    const auto cs = layered::make_checksum(a.len, a.delta, a.seed, a.max_attempts);
    if (!a.out.empty()) write_file(a.out, layered::serialize_checksum(cs));
    std::cout << "constructed: checksum len=" << cs.input_length << " rows=" << cs.parity_rows()
              << " distance=" << cs.required_distance << "\n"
              << "verification: PASSED\n";
    return 0;
}

struct ConstructLayeredArgs {
    std::size_t k0 = 0, ell = 2, s = 0, ssub = 0, extensions = 1, max_attempts = 200;
    double eps = 0.0, rate = 0.5;
    std::uint64_t seed = 0, cap = kDefaultWorkCap;
    std::string subset_path, out;
};

int run_construct_layered(const ConstructLayeredArgs& a) {
    auto subset = load_subset_file(a.subset_path);
    layered::LayeredCode code = layered::seed_code(a.k0, a.eps, a.rate, a.seed, a.max_attempts);
    for (std::size_t e = 1; e <= a.extensions; ++e) {
        layered::LayeredPlan plan;
        plan.epsilon = a.eps;
        plan.ell = a.ell;
        plan.block_bits = a.s;
        plan.sub_bits = a.ssub;
        plan.checksum_delta = 2.0 * a.eps;
        plan.seed = derive_seed(a.seed, e);
        plan.subset_code = subset;
        plan.subset_code_ref = a.subset_path;
        plan.checksum_max_attempts = a.max_attempts;
        code = layered::extend(code, plan);
    }
    const auto report = layered::verify_layered(code, a.cap);
    if (!a.out.empty()) write_file(a.out, code.serialize());
    std::cout << "constructed: layered mlen=" << code.message_length()
              << " clen=" << code.codeword_length() << " segments=" << code.segments().size()
              << "\n";
    return report_exit(report);
}

// ---- verify ---------------------------------------------------------

struct VerifyArgs {
    std::string artifact, check = "unbounded";
    std::uint64_t cap = kDefaultWorkCap;
};

int run_verify(const VerifyArgs& a) {
    const std::string text = read_file(a.artifact);
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    if (kind == "lincode") {
        const auto schedule = lincode::GeneratorSchedule::parse(text);
        const auto report = a.check == "random-error"
                                ? lincode::verify_random_error_distance(schedule, a.cap)
                                : lincode::verify_unbounded_distance(schedule, a.cap);
        return report_exit(report);
    }
    if (kind == "subsetcode") {
        return report_exit(
            subsetcode::verify_subset_distance(subsetcode::SubsetCode::parse(text), a.cap));
    }
    if (kind == "layered") {
        const auto code = layered::LayeredCode::parse(text, load_subset_file);
        return report_exit(layered::verify_layered(code, a.cap));
    }
    if (kind == "checksum") {
        return report_exit(layered::verify_checksum(layered::parse_checksum(text), a.cap));
    }
    throw ParseError("unrecognized artifact kind: " + kind);
}

// ---- simulate -------------------------------------------------------

struct SimulateArgs {
    std::string artifact, channel = "bsc", out;
    double eps = -1.0, packet_delta = 0.25;
    std::size_t j = 0, target_i = 0, trials = 100;
    std::size_t packet_len = 8, overshoot = 1, packet_msg_bits = 4, attack_packets = 1;
    std::uint64_t seed = 0, cap = kDefaultWorkCap;
};

int run_simulate(const SimulateArgs& a) {
    const auto schedule = lincode::GeneratorSchedule::parse(read_file(a.artifact));
    const double eps = a.eps >= 0.0 ? a.eps : schedule.plan().epsilon;

    if (a.channel == "bsc") {
        const auto result =
            channels::monte_carlo_bsc(schedule, eps, a.j, a.target_i, a.trials, a.seed, a.cap);
        std::ostringstream records;
        for (const auto& rec : result.records) {
            records << "trial=" << rec.trial << " j=" << rec.j << " i=" << rec.target_i
                    << " flips=" << rec.flips << " ok=" << (rec.ok ? 1 : 0) << "\n";
        }
        if (!a.out.empty()) {
            write_file(a.out, records.str());
        } else {
            std::cout << records.str();
        }
        std::cout << "failure_rate=" << fmt(result.failure_rate)
                  << " ci95=" << fmt(result.ci95_half_width) << "\n";
        return 0;
    }

    if (a.channel == "per-packet") {
        if (a.j % a.packet_len != 0) {
            throw DomainError("per-packet simulation requires j to be a whole number of packets");
        }
        const std::size_t packets = a.j / a.packet_len;
        const auto per_packet_flips = static_cast<std::size_t>(floor_int(
                                          eps * static_cast<double>(a.packet_len))) +
                                      a.overshoot;
        if (per_packet_flips > a.packet_len) {
            throw DomainError("per_packet flips exceed the packet length");
        }
        const std::size_t attacked =
            a.attack_packets == 0 ? packets : std::min(a.attack_packets, packets);
        channels::ErrorPattern pattern;
        pattern.length = a.j;
        pattern.flips = BitVector(a.j);
        for (std::size_t q = 0; q < attacked; ++q) {
            for (std::size_t t = 0; t < per_packet_flips; ++t) {
                pattern.flips.set(q * a.packet_len + t);
            }
        }

        SeededRandomSource rng(a.seed);
        const std::size_t source_bits =
            std::max(packets * a.packet_msg_bits, schedule.plan().row_length(a.j));
        const BitVector source = rng.next_bits(source_bits);

        BitVector stream(packets * a.packet_msg_bits);
        for (std::size_t t = 0; t < stream.size(); ++t) stream.set(t, source.get(t));
        const std::size_t baseline = channels::packetized_baseline(
            a.packet_msg_bits, a.packet_len, a.packet_delta, stream, pattern, a.seed);

        BitVector message(schedule.plan().row_length(a.j));
        for (std::size_t t = 0; t < message.size(); ++t) message.set(t, source.get(t));
        BitVector received = schedule.encode_prefix(message, a.j);
        received.xor_in(pattern.flips);
        const auto outcome =
            channels::decode_nearest(schedule, received, a.target_i, &message, a.cap);
        std::size_t unbounded = 0;
        while (unbounded < a.target_i &&
               outcome.recovered_prefix.get(unbounded) == message.get(unbounded)) {
            ++unbounded;
        }

        std::cout << "pattern_weight=" << pattern.weight() << " fraction="
                  << fmt(static_cast<double>(pattern.weight()) / static_cast<double>(a.j))
                  << "\n"
                  << "baseline_recovered=" << baseline << " unbounded_recovered=" << unbounded
                  << " target=" << a.target_i << "\n";
        return 0;
    }

    throw DomainError("unknown channel: " + a.channel);
}

// ---- bounds ---------------------------------------------------------

struct BoundsArgs {
    std::vector<double> eps_list;
    std::string format = "table", out;
};

int run_bounds(const BoundsArgs& a) {
    std::vector<BoundsRow> rows;
    rows.reserve(a.eps_list.size());
    for (const double eps : a.eps_list) rows.push_back(bounds_row(eps));

    std::ostringstream out;
    const char* names[] = {"eps",
                           "construction_rate",
                           "linear_upper",
                           "improved_rate_form",
                           "random_error_rate",
                           "subset_delta",
                           "subset_alpha",
                           "t_exp_general",
                           "t_exp_greedy",
                           "t_exp_linear",
                           "greedy_regime"};
    auto fields = [](const BoundsRow& r) {
        return std::vector<std::string>{fmt(r.eps),
                                        fmt(r.construction_rate),
                                        fmt(r.linear_upper),
                                        fmt(r.improved_rate_form),
                                        fmt(r.random_error_rate),
                                        fmt(r.subset_delta),
                                        fmt(r.subset_alpha),
                                        fmt(r.t_exp_general),
                                        fmt(r.t_exp_greedy),
                                        fmt(r.t_exp_linear),
                                        r.greedy_regime ? "1" : "0"};
    };
    if (a.format == "table") {
        out << "# streamcode bounds v1 (formula evaluations, not measurements)\n";
        for (const auto* name : names) out << name << " ";
        out << "\n";
        for (const auto& r : rows) {
            for (const auto& f : fields(r)) out << f << " ";
            out << "\n";
        }
    } else if (a.format == "csv") {
        out << "schema,bounds.v1\n";
        for (std::size_t c = 0; c < std::size(names); ++c) {
            out << names[c] << (c + 1 < std::size(names) ? "," : "\n");
        }
        for (const auto& r : rows) {
            const auto f = fields(r);
            for (std::size_t c = 0; c < f.size(); ++c) {
                out << f[c] << (c + 1 < f.size() ? "," : "\n");
            }
        }
    } else if (a.format == "json-lines") {
        for (const auto& r : rows) {
            nlohmann::json obj;
            obj["schema"] = "bounds.v1";
            obj["eps"] = r.eps;
            obj["construction_rate"] = r.construction_rate;
            obj["linear_upper"] = r.linear_upper;
            obj["improved_rate_form"] = r.improved_rate_form;
            obj["random_error_rate"] = r.random_error_rate;
            obj["subset_delta"] = r.subset_delta;
            obj["subset_alpha"] = r.subset_alpha;
            obj["t_exp_general"] = r.t_exp_general;
            obj["t_exp_greedy"] = r.t_exp_greedy;
            obj["t_exp_linear"] = r.t_exp_linear;
            obj["greedy_regime"] = r.greedy_regime;
            out << obj.dump() << "\n";
        }
    } else {
        throw DomainError("unknown format: " + a.format);
    }
    if (!a.out.empty()) {
        write_file(a.out, out.str());
    } else {
        std::cout << out.str();
    }
    return 0;
}

// ---- profile --------------------------------------------------------

struct ProfileArgs {
    std::string artifact, out;
};

int run_profile(const ProfileArgs& a) {
    const std::string text = read_file(a.artifact);
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    std::ostringstream records;
    if (kind == "lincode") {
        const auto schedule = lincode::GeneratorSchedule::parse(text);
        const auto profile = analysis::rank_profile(schedule, schedule.horizon());
        for (std::size_t i = 0; i < profile.values.size(); ++i) {
            records << i << " " << profile.values[i] << "\n";
        }
    } else if (kind == "layered") {
        const auto code = layered::LayeredCode::parse(text, load_subset_file);
        const auto profile = analysis::prefix_entropy_profile(
            [&code](const BitVector& msg) { return code.encode(msg); }, code.message_length(),
            code.codeword_length());
        for (std::size_t i = 0; i < profile.size(); ++i) {
            records << i << " " << fmt(profile[i]) << "\n";
        }
    } else {
        throw ParseError("profile supports lincode and layered artifacts");
    }
    if (!a.out.empty()) {
        write_file(a.out, records.str());
    } else {
        std::cout << records.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streamcode: unbounded error-correcting code toolkit"};
    app.require_subcommand(1);

    ConstructLinearArgs lin;
    ConstructSubsetArgs sub;
    ConstructChecksumArgs chk;
    ConstructLayeredArgs lay;
    VerifyArgs ver;
    SimulateArgs sim;
    BoundsArgs bnd;
    ProfileArgs prof;

    auto* construct = app.add_subcommand("construct", "build and verify an artifact");
    construct->require_subcommand(1);

    auto* c_lin = construct->add_subcommand("linear", "random linear unbounded code");
    c_lin->add_option("--eps", lin.eps, "error fraction")->required();
    c_lin->add_option("--R", lin.rate, "rate")->required();
    c_lin->add_option("--tau", lin.tau, "introduction rate")->required();
    c_lin->add_option("--k0", lin.k0, "minimum prefix length")->required();
    c_lin->add_option("--n", lin.n, "horizon")->required();
    c_lin->add_option("--seed", lin.seed, "base seed")->required();
    c_lin->add_option("--max-attempts", lin.max_attempts, "rejection budget");
    c_lin->add_option("--cap", lin.cap, "verification work cap");
    c_lin->add_option("--out", lin.out, "artifact path");

    auto* c_sub = construct->add_subcommand("subset", "subset code");
    c_sub->add_option("--n", sub.n, "ambient dimension")->required();
    c_sub->add_option("--k", sub.k, "log2 of the target family size, +1")->required();
    c_sub->add_option("--delta", sub.delta, "relative distance")->required();
    c_sub->add_option("--seed", sub.seed, "seed")->required();
    c_sub->add_option("--method", sub.method, "greedy or trivial");
    c_sub->add_option("--cap", sub.cap, "candidate cap per subset");
    c_sub->add_option("--out", sub.out, "artifact path");

    auto* c_chk = construct->add_subcommand("checksum", "systematic checksum");
    c_chk->add_option("--len", chk.len, "input length")->required();
    c_chk->add_option("--delta", chk.delta, "relative distance")->required();
    c_chk->add_option("--seed", chk.seed, "seed")->required();
    c_chk->add_option("--max-attempts", chk.max_attempts, "rejection budget");
    c_chk->add_option("--out", chk.out, "artifact path");

    auto* c_lay = construct->add_subcommand("layered", "layered code (base + extensions)");
    c_lay->add_option("--k0", lay.k0, "base message bits")->required();
    c_lay->add_option("--eps", lay.eps, "error fraction")->required();
    c_lay->add_option("--rate", lay.rate, "base code rate");
    c_lay->add_option("--ell", lay.ell, "blocks per extension");
    c_lay->add_option("--s", lay.s, "block size")->required();
    c_lay->add_option("--ssub", lay.ssub, "sub-block size")->required();
    c_lay->add_option("--subset", lay.subset_path, "subset code artifact")->required();
    c_lay->add_option("--extensions", lay.extensions, "number of extensions");
    c_lay->add_option("--seed", lay.seed, "seed")->required();
    c_lay->add_option("--max-attempts", lay.max_attempts, "rejection budget");
    c_lay->add_option("--cap", lay.cap, "verification work cap");
    c_lay->add_option("--out", lay.out, "artifact path");

    auto* v = app.add_subcommand("verify", "re-run the verifier for an artifact");
    v->add_option("--artifact", ver.artifact, "artifact path")->required();
    v->add_option("--check", ver.check, "unbounded or random-error (lincode only)");
    v->add_option("--cap", ver.cap, "work cap");

    auto* s = app.add_subcommand("simulate", "channel simulation");
    s->add_option("--artifact", sim.artifact, "lincode artifact")->required();
    s->add_option("--channel", sim.channel, "bsc or per-packet");
    s->add_option("--eps", sim.eps, "channel error rate (default: code's eps)");
    s->add_option("--j", sim.j, "codeword prefix length")->required();
    s->add_option("--target-i", sim.target_i, "message prefix to recover")->required();
    s->add_option("--trials", sim.trials, "Monte Carlo trials (bsc)");
    s->add_option("--seed", sim.seed, "seed")->required();
    s->add_option("--packet-len", sim.packet_len, "packet length (per-packet)");
    s->add_option("--overshoot", sim.overshoot, "extra flips per packet");
    s->add_option("--packet-msg-bits", sim.packet_msg_bits, "message bits per packet");
    s->add_option("--packet-delta", sim.packet_delta, "packet code distance");
    s->add_option("--attack-packets", sim.attack_packets,
                  "packets hit from the front; 0 = all");
    s->add_option("--cap", sim.cap, "decode work cap");
    s->add_option("--out", sim.out, "per-trial record path");

    auto* b = app.add_subcommand("bounds", "rate bound table from the closed forms");
    b->add_option("--eps", bnd.eps_list, "epsilon values")->required()->delimiter(',');
    b->add_option("--format", bnd.format, "table, json-lines, or csv");
    b->add_option("--out", bnd.out, "output path");

    auto* p = app.add_subcommand("profile", "rank/entropy profile records");
    p->add_option("--artifact", prof.artifact, "artifact path")->required();
    p->add_option("--out", prof.out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c_lin->parsed()) return run_construct_linear(lin);
        if (c_sub->parsed()) return run_construct_subset(sub);
        if (c_chk->parsed()) return run_construct_checksum(chk);
        if (c_lay->parsed()) return run_construct_layered(lay);
        if (v->parsed()) return run_verify(ver);
        if (s->parsed()) return run_simulate(sim);
        if (b->parsed()) return run_bounds(bnd);
        if (p->parsed()) return run_profile(prof);
    } catch (const ScaleExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScale;
    } catch (const ConstructionFailedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}
