// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "streamcode/errors.hpp"
#include "streamcode/layered.hpp"
#include "streamcode/numeric.hpp"
#include "streamcode/rng.hpp"
#include "streamcode/util.hpp"

namespace streamcode::channels {

std::string ErrorPattern::serialize() const {
    std::ostringstream out;
    out << "pattern v1 len=" << length << "\n" << flips.to_hex() << "\n";
    return out.str();
}

ErrorPattern ErrorPattern::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header, payload;
    if (!std::getline(in, header) || !std::getline(in, payload)) {
        throw ParseError("pattern artifact truncated");
    }
    std::istringstream hs(header);
    std::string magic, version, field;
    hs >> magic >> version >> field;
    if (magic != "pattern" || version != "v1" || field.rfind("len=", 0) != 0) {
        throw ParseError("bad pattern header");
    }
    ErrorPattern p;
    try {
        p.length = std::stoull(field.substr(4));
    } catch (const std::exception&) {
        throw ParseError("bad pattern length");
    }
    p.flips = BitVector::from_hex(payload, p.length);
    return p;
}

void ChannelSpec::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("channel requires eps in [0,1]");
    if (kind == Kind::per_packet) {
        if (packet_len < 2) throw DomainError("per_packet requires packet_len >= 2");
        if (overshoot < 1) throw DomainError("per_packet requires overshoot >= 1");
    }
}

ErrorPattern sample_pattern(const ChannelSpec& spec, std::size_t j) {
    spec.validate();
    if (j < 1) throw DomainError("sample_pattern requires j >= 1");
    ErrorPattern pattern;
    pattern.length = j;
    pattern.flips = BitVector(j);
    switch (spec.kind) {
        case ChannelSpec::Kind::bsc: {
            SeededRandomSource rng(spec.seed);
            for (std::size_t t = 0; t < j; ++t) {
                if (rng.next_unit() < spec.epsilon) pattern.flips.set(t);
            }
            return pattern;
        }
        case ChannelSpec::Kind::per_packet: {
            const auto per_packet = static_cast<std::size_t>(
                floor_int(spec.epsilon * static_cast<double>(spec.packet_len))) +
                spec.overshoot;
            if (per_packet > spec.packet_len) {
                throw DomainError("per_packet flips exceed the packet length");
            }
            for (std::size_t start = 0; start + spec.packet_len <= j; start += spec.packet_len) {
                for (std::size_t t = 0; t < per_packet; ++t) pattern.flips.set(start + t);
            }
            return pattern;
        }
        case ChannelSpec::Kind::adversarial_budget:
            throw DomainError("adversarial_budget patterns are caller-supplied; pass positions");
    }
    throw DomainError("unknown channel kind");
}

ErrorPattern sample_pattern(const ChannelSpec& spec, std::size_t j,
                            std::span<const std::size_t> positions) {
    spec.validate();
    if (spec.kind != ChannelSpec::Kind::adversarial_budget) {
        throw DomainError("positions are only accepted for adversarial_budget");
    }
    if (j < 1) throw DomainError("sample_pattern requires j >= 1");
    const auto budget = static_cast<std::size_t>(
        std::max<std::int64_t>(0, floor_int(spec.epsilon * static_cast<double>(j))));
    if (positions.size() > budget) {
        throw DomainError("adversarial pattern exceeds the floor(eps*j) budget");
    }
    ErrorPattern pattern;
    pattern.length = j;
    pattern.flips = BitVector(j);
    for (const auto pos : positions) {
        if (pos >= j) throw DomainError("flip position out of range");
        if (pattern.flips.get(pos)) throw DomainError("duplicate flip position");
        pattern.flips.set(pos);
    }
    return pattern;
}

namespace {

struct DecoderContext {
    const lincode::GeneratorSchedule& schedule;
    const BitVector& received;
    std::size_t message_bits;
    // Codeword indices whose coefficient row becomes fully determined
    // once message bits 1..d are fixed.
    std::vector<std::vector<std::size_t>> rows_by_depth;
    std::uint64_t work_cap;
    std::uint64_t nodes = 0;

    BitVector candidate;
    std::size_t best_distance;
    BitVector best_message;

    DecoderContext(const lincode::GeneratorSchedule& g, const BitVector& r, std::uint64_t cap)
        : schedule(g), received(r), work_cap(cap) {
        const std::size_t j = received.size();
        message_bits = g.plan().row_length(j);
        rows_by_depth.assign(message_bits + 1, {});
        for (std::size_t ell = 1; ell <= j; ++ell) {
            rows_by_depth[g.plan().row_length(ell)].push_back(ell);
        }
        candidate = BitVector(message_bits);
        best_distance = j + 1;
        best_message = BitVector(message_bits);
    }

    std::size_t mismatch_at_depth(std::size_t depth) {
        std::size_t mism = 0;
        for (const std::size_t ell : rows_by_depth[depth]) {
            if (schedule.encode_bit(candidate, ell) != received.get(ell - 1)) ++mism;
        }
        return mism;
    }

    void dfs(std::size_t depth, std::size_t distance) {
        if (++nodes > work_cap) {
            throw ScaleExceededError("decode_nearest work cap exceeded");
        }
        if (distance > best_distance) return;
        if (depth == message_bits) {
            if (distance < best_distance ||
                (distance == best_distance && BitVector::lex_less(candidate, best_message))) {
                best_distance = distance;
                best_message = candidate;
            }
            return;
        }
        for (const bool bit : {false, true}) {
            candidate.set(depth, bit);
            dfs(depth + 1, distance + mismatch_at_depth(depth + 1));
        }
        candidate.set(depth, false);
    }

    void seed_greedy() {
        std::size_t distance = 0;
        for (std::size_t depth = 1; depth <= message_bits; ++depth) {
            candidate.set(depth - 1, false);
            const std::size_t zero_cost = mismatch_at_depth(depth);
            candidate.set(depth - 1, true);
            const std::size_t one_cost = mismatch_at_depth(depth);
            if (zero_cost <= one_cost) {
                candidate.set(depth - 1, false);
                distance += zero_cost;
            } else {
                distance += one_cost;
            }
        }
        best_distance = distance;
        best_message = candidate;
        candidate = BitVector(message_bits);
    }
};

}  // namespace

DecodeOutcome decode_nearest(const lincode::GeneratorSchedule& schedule, const BitVector& received,
                             std::size_t target_i, const BitVector* truth,
                             std::uint64_t work_cap) {
    const std::size_t j = received.size();
    if (j < 1 || j > schedule.horizon()) {
        throw DomainError("decode_nearest requires 1 <= |received| <= horizon");
    }
    const auto max_target = static_cast<std::size_t>(std::max<std::int64_t>(
        0, floor_int(schedule.plan().rate * static_cast<double>(j))));
    if (target_i > max_target) throw DomainError("decode_nearest requires target_i <= R*j");

    DecoderContext ctx(schedule, received, work_cap);
    ctx.seed_greedy();
    ctx.dfs(0, 0);

    DecodeOutcome outcome;
    outcome.target_length = target_i;
    outcome.recovered_prefix = ctx.best_message.prefix(target_i);
    outcome.candidates_scanned = ctx.nodes;
    outcome.success = truth == nullptr || outcome.recovered_prefix == truth->prefix(target_i);
    return outcome;
}

DecodeOutcome decode_nearest_exhaustive(
    const std::function<BitVector(const BitVector&)>& encoder, std::size_t message_bits,
    const BitVector& received, std::size_t target_i, const BitVector* truth,
    std::uint64_t work_cap) {
    if (message_bits > 26) throw ScaleExceededError("decode_nearest_exhaustive supports <= 26 bits");
    if (target_i > message_bits) throw DomainError("target_i exceeds the message length");
    const std::uint64_t count = std::uint64_t{1} << message_bits;
    if (count > work_cap) throw ScaleExceededError("decode_nearest_exhaustive work cap exceeded");

    const std::size_t j = received.size();
    BitVector best;
    std::size_t best_distance = j + 1;
    for (std::uint64_t c = 0; c < count; ++c) {
        BitVector msg(message_bits);
        for (std::size_t t = 0; t < message_bits; ++t) {
            if ((c >> (message_bits - 1 - t)) & 1) msg.set(t);
        }
        const BitVector codeword = encoder(msg);
        if (codeword.size() < j) throw DomainError("encoder output shorter than the received word");
        std::size_t distance = 0;
        for (std::size_t t = 0; t < j; ++t) {
            if (codeword.get(t) != received.get(t)) ++distance;
        }
        if (distance < best_distance) {
            best_distance = distance;
            best = std::move(msg);
        }
    }
    DecodeOutcome outcome;
    outcome.target_length = target_i;
    outcome.recovered_prefix = best.prefix(target_i);
    outcome.candidates_scanned = count;
    outcome.success = truth == nullptr || outcome.recovered_prefix == truth->prefix(target_i);
    return outcome;
}

std::size_t packetized_baseline(std::size_t packet_message_bits, std::size_t packet_code_bits,
                                double delta, const BitVector& stream, const ErrorPattern& pattern,
                                std::uint64_t seed, std::size_t max_attempts) {
    if (packet_message_bits < 1 || packet_message_bits > 20) {
        throw DomainError("packetized_baseline supports 1 <= packet_message_bits <= 20");
    }
    if (packet_code_bits <= packet_message_bits) {
        throw DomainError("packet_code_bits must exceed packet_message_bits");
    }
    if (stream.size() % packet_message_bits != 0) {
        throw DomainError("stream length must be a multiple of packet_message_bits");
    }
    const std::size_t packets = stream.size() / packet_message_bits;
    if (pattern.length != packets * packet_code_bits) {
        throw DomainError("pattern length must match the packetized codeword length");
    }

    const auto required = static_cast<std::size_t>(std::max<std::int64_t>(
        1, ceil_int(delta * static_cast<double>(packet_code_bits))));
    const layered::SystematicChecksum code = layered::sample_systematic(
        packet_message_bits, packet_code_bits - packet_message_bits, required, delta, seed,
        max_attempts);

    // All packet codewords, indexed by message value; packet messages are
    // read big-endian like every other field in this library.
    const std::size_t space = std::size_t{1} << packet_message_bits;
    std::vector<BitVector> codewords(space);
    for (std::size_t v = 0; v < space; ++v) {
        BitVector msg(packet_message_bits);
        for (std::size_t t = 0; t < packet_message_bits; ++t) {
            if ((v >> (packet_message_bits - 1 - t)) & 1) msg.set(t);
        }
        BitVector cw(packet_code_bits);
        for (std::size_t t = 0; t < packet_message_bits; ++t) cw.set(t, msg.get(t));
        const BitVector parity = code.apply(msg);
        for (std::size_t t = 0; t < parity.size(); ++t) {
            cw.set(packet_message_bits + t, parity.get(t));
        }
        codewords[v] = std::move(cw);
    }

    for (std::size_t q = 0; q < packets; ++q) {
        std::size_t truth_value = 0;
        for (std::size_t t = 0; t < packet_message_bits; ++t) {
            truth_value = (truth_value << 1) |
                          (stream.get(q * packet_message_bits + t) ? 1 : 0);
        }
        BitVector received = codewords[truth_value];
        for (std::size_t t = 0; t < packet_code_bits; ++t) {
            if (pattern.flips.get(q * packet_code_bits + t)) received.flip(t);
        }
        // Exhaustive nearest codeword; value order is lexicographic on
        // the message, so ties resolve to the lex-smallest message.
        std::size_t best_value = 0, best_distance = packet_code_bits + 1;
        for (std::size_t v = 0; v < space; ++v) {
            const std::size_t d = hamming_distance(received, codewords[v]);
            if (d < best_distance) {
                best_distance = d;
                best_value = v;
            }
        }
        if (best_value != truth_value) return q * packet_message_bits;
    }
    return stream.size();
}

MonteCarloResult monte_carlo_bsc(const lincode::GeneratorSchedule& schedule, double epsilon,
                                 std::size_t j, std::size_t target_i, std::size_t trials,
                                 std::uint64_t seed, std::uint64_t work_cap) {
    if (trials < 1) throw DomainError("monte_carlo_bsc requires trials >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("eps must be in [0,1]");

    MonteCarloResult result;
    result.trials = trials;
    result.records.assign(trials, {});

    auto run_trial = [&](std::size_t t) {
        SeededRandomSource rng(derive_seed(seed, t));
        const BitVector message = rng.next_bits(schedule.plan().row_length(j));
        BitVector received = schedule.encode_prefix(message, j);
        std::size_t flipped = 0;
        for (std::size_t pos = 0; pos < j; ++pos) {
            if (rng.next_unit() < epsilon) {
                received.flip(pos);
                ++flipped;
            }
        }
        const DecodeOutcome outcome = decode_nearest(schedule, received, target_i, &message,
                                                     work_cap);
        result.records[t] = {t, j, target_i, flipped, outcome.success};
    };

    const unsigned threads = std::min<std::size_t>(thread_budget(), trials);
    if (threads <= 1) {
        for (std::size_t t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::string> errors(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = w; t < trials; t += threads) run_trial(t);
                } catch (const std::exception& e) {
                    errors[w] = e.what();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errors) {
            if (!err.empty()) throw ScaleExceededError(err);
        }
    }

    std::size_t failures = 0;
    for (const auto& rec : result.records) {
        if (!rec.ok) ++failures;
    }
    const double p = static_cast<double>(failures) / static_cast<double>(trials);
    result.failure_rate = p;
    result.ci95_half_width = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return result;
}

}  // namespace streamcode::channels
