// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/layered.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "streamcode/errors.hpp"
#include "streamcode/numeric.hpp"
#include "streamcode/rng.hpp"

namespace streamcode::layered {

namespace {

std::size_t required_distance_for(double delta, std::size_t total) {
    return static_cast<std::size_t>(
        std::max<std::int64_t>(1, ceil_int(delta * static_cast<double>(total))));
}

// Big-endian packing of a message field into a subset-code index: the
// first message bit of the field is the most significant index bit.
std::size_t pack_index(const BitVector& message, std::size_t offset, std::size_t bits) {
    std::size_t value = 0;
    for (std::size_t t = 0; t < bits; ++t) {
        value = (value << 1) | (offset + t < message.size() && message.get(offset + t) ? 1 : 0);
    }
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> fields;
    std::string f;
    while (in >> f) fields.push_back(f);
    return fields;
}

std::string field_value(const std::vector<std::string>& fields, const std::string& key) {
    const std::string prefix = key + "=";
    for (const auto& f : fields) {
        if (f.rfind(prefix, 0) == 0) return f.substr(prefix.size());
    }
    throw ParseError("missing field " + key);
}

}  // namespace

BitVector SystematicChecksum::apply(const BitVector& x) const {
    BitVector out(parity.rows());
    for (std::size_t r = 0; r < parity.rows(); ++r) {
        if (gf2_dot(parity.row(r), x)) out.set(r);
    }
    return out;
}

std::size_t checksum_parity_rows(std::size_t input_length, double delta) {
    const double h = binary_entropy(delta);
    if (h > 0.95) throw DomainError("checksum delta too close to 1/2; parity count diverges");
    std::size_t p = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        const auto next = static_cast<std::size_t>(std::max<std::int64_t>(
            0, ceil_int(h * static_cast<double>(input_length + p))));
        if (next == p) return p;
        p = next;
    }
    throw DomainError("checksum parity fixed point did not converge");
}

namespace {

// Only inputs with wt(x) < required can violate wt(x) + wt(Px) >=
// required, so the scan enumerates exactly those supports (DFS over
// index-increasing supports, parity accumulated incrementally). Returns
// a violating input if one exists.
std::optional<BitVector> find_light_input(const BitMatrix& parity, std::size_t input_length,
                                          std::size_t required, std::uint64_t work_cap) {
    {
        BigInt count = 0;
        for (std::size_t w = 1; w < required && w <= input_length; ++w) {
            count += binomial(input_length, w);
        }
        if (count > work_cap) {
            throw ScaleExceededError("checksum distance scan exceeds the work cap");
        }
    }
    const std::size_t parity_rows = parity.rows();
    std::optional<BitVector> violation;
    BitVector x(input_length);
    BitVector acc(parity_rows);
    std::function<void(std::size_t, std::size_t)> scan = [&](std::size_t next, std::size_t w) {
        if (violation) return;
        if (w >= 1 && w + acc.weight() < required) {
            violation = x;
            return;
        }
        if (w + 1 >= required) return;
        for (std::size_t i = next; i < input_length; ++i) {
            x.set(i);
            for (std::size_t r = 0; r < parity_rows; ++r) {
                if (parity.get(r, i)) acc.flip(r);
            }
            scan(i + 1, w + 1);
            x.set(i, false);
            for (std::size_t r = 0; r < parity_rows; ++r) {
                if (parity.get(r, i)) acc.flip(r);
            }
            if (violation) return;
        }
    };
    scan(0, 0);
    return violation;
}

}  // namespace

SystematicChecksum sample_systematic(std::size_t input_length, std::size_t parity_rows,
                                     std::size_t required_distance, double delta,
                                     std::uint64_t seed, std::size_t max_attempts,
                                     std::uint64_t work_cap) {
    if (input_length == 0) throw DomainError("sample_systematic requires input_length >= 1");
    if (max_attempts < 1) throw DomainError("sample_systematic requires max_attempts >= 1");

    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        SeededRandomSource rng(derive_seed(seed, attempt - 1));
        std::vector<BitVector> rows;
        rows.reserve(parity_rows);
        for (std::size_t r = 0; r < parity_rows; ++r) rows.push_back(rng.next_bits(input_length));
        BitMatrix parity = BitMatrix::from_rows(std::move(rows));
        if (!find_light_input(parity, input_length, required_distance, work_cap)) {
            SystematicChecksum cs;
            cs.input_length = input_length;
            cs.parity = std::move(parity);
            cs.delta = delta;
            cs.required_distance = required_distance;
            return cs;
        }
    }
    throw ConstructionFailedError("sample_systematic: no matrix reached the distance target",
                                  max_attempts);
}

VerificationReport verify_checksum(const SystematicChecksum& cs, std::uint64_t work_cap) {
    VerificationReport report;
    const auto violation =
        find_light_input(cs.parity, cs.input_length, cs.required_distance, work_cap);
    if (violation) {
        report.passed = false;
        Counterexample ce;
        ce.difference = *violation;
        ce.achieved_distance = violation->weight() + cs.apply(*violation).weight();
        ce.required_distance = static_cast<double>(cs.required_distance);
        ce.note = "concatenated weight below the distance target";
        report.counterexample = ce;
    }
    return report;
}

SystematicChecksum make_checksum(std::size_t input_length, double delta, std::uint64_t seed,
                                 std::size_t max_attempts, std::uint64_t work_cap) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("make_checksum requires 0 < delta < 1");
    const std::size_t parity = checksum_parity_rows(input_length, delta);
    const std::size_t total = input_length + parity;
    const auto required = static_cast<std::size_t>(
        std::max<std::int64_t>(1, ceil_int(delta * static_cast<double>(total))));
    return sample_systematic(input_length, parity, required, delta, seed, max_attempts, work_cap);
}

std::string serialize_checksum(const SystematicChecksum& cs) {
    std::ostringstream out;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", cs.delta);
    out << "checksum v1 len=" << cs.input_length << " delta=" << buf
        << " rows=" << cs.parity.rows() << "\n";
    for (std::size_t r = 0; r < cs.parity.rows(); ++r) out << cs.parity.row(r).to_hex() << "\n";
    return out.str();
}

SystematicChecksum parse_checksum(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty checksum artifact");
    const auto fields = split_fields(header);
    if (fields.size() < 2 || fields[0] != "checksum" || fields[1] != "v1") {
        throw ParseError("bad checksum header");
    }
    SystematicChecksum cs;
    std::size_t rows = 0;
    try {
        cs.input_length = std::stoull(field_value(fields, "len"));
        cs.delta = std::stod(field_value(fields, "delta"));
        rows = std::stoull(field_value(fields, "rows"));
    } catch (const std::invalid_argument&) {
        throw ParseError("malformed checksum header value");
    } catch (const std::out_of_range&) {
        throw ParseError("out-of-range checksum header value");
    }
    if (rows > (std::size_t{1} << 20)) throw ParseError("checksum row count implausibly large");
    std::vector<BitVector> parsed;
    parsed.reserve(rows);
    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw ParseError("checksum artifact truncated");
        parsed.push_back(BitVector::from_hex(line, cs.input_length));
    }
    cs.parity = BitMatrix::from_rows(std::move(parsed));
    cs.required_distance = required_distance_for(cs.delta, cs.total_length());
    return cs;
}

Segment::Kind Segment::kind() const {
    if (std::holds_alternative<BasePayload>(payload)) return Kind::base;
    if (std::holds_alternative<SubsetPayload>(payload)) return Kind::subset_block;
    return Kind::checksum;
}

void LayeredPlan::validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("plan requires 0 < eps < 1/2");
    if (ell < 2) throw DomainError("plan requires ell >= 2");
    if (block_bits < 1 || sub_bits < 1) throw DomainError("plan requires positive block sizes");
    if (!(checksum_delta > 0.0 && checksum_delta < 1.0)) {
        throw DomainError("plan requires 0 < checksum_delta < 1");
    }
    if (!subset_code) throw DomainError("plan requires a subset code");
    const auto& params = subset_code->params();
    if ((std::size_t{1} << block_bits) > params.K) {
        throw DomainError("subset code has too few subsets for block_bits");
    }
    if ((std::size_t{1} << sub_bits) > params.T) {
        throw DomainError("subset code subsets are too small for sub_bits");
    }
}

LayeredCode::LayeredCode(double epsilon, std::vector<Segment> segments, std::size_t message_length,
                         std::size_t codeword_length)
    : epsilon_(epsilon),
      segments_(std::move(segments)),
      message_length_(message_length),
      codeword_length_(codeword_length) {
    if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) throw DomainError("layered code requires 0 < eps < 1");
    // Segments must tile [0, codeword_length) exactly.
    std::size_t cursor = 0;
    for (const auto& seg : segments_) {
        if (seg.start != cursor || seg.length == 0) {
            throw DomainError("segments must tile the codeword exactly");
        }
        cursor += seg.length;
    }
    if (cursor != codeword_length_) throw DomainError("segments do not cover the codeword");
}

BitVector LayeredCode::encode(const BitVector& message) const {
    if (message.size() > message_length_) {
        throw DomainError("message longer than the code's message length");
    }
    BitVector out(codeword_length_);
    for (const auto& seg : segments_) {
        if (const auto* base = std::get_if<BasePayload>(&seg.payload)) {
            for (std::size_t m = 0; m < base->generator.size(); ++m) {
                if (m < message.size() && message.get(m)) {
                    for (std::size_t t = 0; t < seg.length; ++t) {
                        if (base->generator[m].get(t)) out.flip(seg.start + t);
                    }
                }
            }
        } else if (const auto* sb = std::get_if<SubsetPayload>(&seg.payload)) {
            const std::size_t k_idx = pack_index(message, sb->block_offset, sb->block_bits);
            const std::size_t t_idx = pack_index(message, sb->sub_offset, sb->sub_bits);
            const BitVector word = sb->code->encode(k_idx, t_idx);
            for (std::size_t t = 0; t < seg.length; ++t) {
                if (word.get(t)) out.set(seg.start + t);
            }
        } else {
            const auto& cs = std::get<ChecksumPayload>(seg.payload).checksum;
            const BitVector parity = cs.apply(out.prefix(seg.start));
            for (std::size_t t = 0; t < seg.length; ++t) {
                if (parity.get(t)) out.set(seg.start + t);
            }
        }
    }
    return out;
}

std::size_t LayeredCode::decodable_prefix_length(std::size_t j) const {
    if (j > codeword_length_) throw DomainError("prefix length exceeds the codeword");
    std::size_t recovered = 0;       // bits through the last recovery point
    std::size_t pending_blocks = 0;  // robust-tier bits recovered since then
    std::size_t introduced = 0;      // message bits introduced so far
    for (const auto& seg : segments_) {
        if (seg.start + seg.length > j) break;
        if (const auto* base = std::get_if<BasePayload>(&seg.payload)) {
            introduced = std::max(introduced, base->generator.size());
            recovered = introduced;
            pending_blocks = 0;
        } else if (const auto* sb = std::get_if<SubsetPayload>(&seg.payload)) {
            introduced = std::max(introduced, sb->block_offset + sb->block_bits);
            introduced = std::max(introduced, sb->sub_offset + sb->sub_bits);
            pending_blocks += sb->block_bits;
        } else {
            recovered = introduced;
            pending_blocks = 0;
        }
    }
    return recovered + pending_blocks;
}

std::string LayeredCode::serialize() const {
    std::ostringstream out;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", epsilon_);
    out << "layered v1 eps=" << buf << " mlen=" << message_length_ << " clen=" << codeword_length_
        << "\n";
    for (const auto& seg : segments_) {
        if (const auto* base = std::get_if<BasePayload>(&seg.payload)) {
            out << "base " << seg.start << " " << seg.length << " k0=" << base->generator.size()
                << " rows=";
            for (std::size_t m = 0; m < base->generator.size(); ++m) {
                if (m) out << ",";
                out << base->generator[m].to_hex();
            }
            out << "\n";
        } else if (const auto* sb = std::get_if<SubsetPayload>(&seg.payload)) {
            out << "subset " << seg.start << " " << seg.length << " block=" << sb->block_index
                << " bo=" << sb->block_offset << " bs=" << sb->block_bits
                << " so=" << sb->sub_offset << " ss=" << sb->sub_bits << " code=" << sb->code_ref
                << "\n";
        } else {
            const auto& cs = std::get<ChecksumPayload>(seg.payload).checksum;
            std::snprintf(buf, sizeof buf, "%.17g", cs.delta);
            out << "checksum " << seg.start << " " << seg.length << " input=" << cs.input_length
                << " delta=" << buf << " rows=";
            for (std::size_t r = 0; r < cs.parity.rows(); ++r) {
                if (r) out << ",";
                out << cs.parity.row(r).to_hex();
            }
            out << "\n";
        }
    }
    return out.str();
}

LayeredCode LayeredCode::parse(std::string_view text, const SubsetLoader& loader) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty layered artifact");
    const auto hfields = split_fields(header);
    if (hfields.size() < 2 || hfields[0] != "layered" || hfields[1] != "v1") {
        throw ParseError("bad layered header");
    }
    double eps = 0.0;
    std::size_t mlen = 0, clen = 0;
    try {
        eps = std::stod(field_value(hfields, "eps"));
        mlen = std::stoull(field_value(hfields, "mlen"));
        clen = std::stoull(field_value(hfields, "clen"));
    } catch (const std::invalid_argument&) {
        throw ParseError("malformed layered header value");
    } catch (const std::out_of_range&) {
        throw ParseError("out-of-range layered header value");
    }

    std::vector<Segment> segments;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() < 3) throw ParseError("malformed segment line: " + line);
        Segment seg;
        try {
            seg.start = std::stoull(fields[1]);
            seg.length = std::stoull(fields[2]);
            if (fields[0] == "base") {
                const std::size_t k0 = std::stoull(field_value(fields, "k0"));
                const std::string rows = field_value(fields, "rows");
                BasePayload payload;
                std::istringstream rs(rows);
                std::string hex;
                while (std::getline(rs, hex, ',')) {
                    payload.generator.push_back(BitVector::from_hex(hex, seg.length));
                }
                if (payload.generator.size() != k0) {
                    throw ParseError("base segment row count mismatch");
                }
                seg.payload = std::move(payload);
            } else if (fields[0] == "subset") {
                SubsetPayload payload;
                payload.block_index = std::stoull(field_value(fields, "block"));
                payload.block_offset = std::stoull(field_value(fields, "bo"));
                payload.block_bits = std::stoull(field_value(fields, "bs"));
                payload.sub_offset = std::stoull(field_value(fields, "so"));
                payload.sub_bits = std::stoull(field_value(fields, "ss"));
                payload.code_ref = field_value(fields, "code");
                payload.code = loader(payload.code_ref);
                if (!payload.code) throw ParseError("subset code reference failed to load");
                if (payload.code->params().n != seg.length) {
                    throw ParseError("subset segment length does not match its code");
                }
                seg.payload = std::move(payload);
            } else if (fields[0] == "checksum") {
                SystematicChecksum cs;
                cs.input_length = std::stoull(field_value(fields, "input"));
                cs.delta = std::stod(field_value(fields, "delta"));
                const std::string rows = field_value(fields, "rows");
                std::vector<BitVector> parsed;
                std::istringstream rs(rows);
                std::string hex;
                while (std::getline(rs, hex, ',')) {
                    parsed.push_back(BitVector::from_hex(hex, cs.input_length));
                }
                if (parsed.size() != seg.length) {
                    throw ParseError("checksum segment row count mismatch");
                }
                cs.parity = BitMatrix::from_rows(std::move(parsed));
                cs.required_distance = required_distance_for(cs.delta, cs.total_length());
                seg.payload = ChecksumPayload{std::move(cs)};
            } else {
                throw ParseError("unknown segment kind: " + fields[0]);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed segment value in: " + line);
        } catch (const std::out_of_range&) {
            throw ParseError("out-of-range segment value in: " + line);
        }
        segments.push_back(std::move(seg));
    }
    try {
        return LayeredCode(eps, std::move(segments), mlen, clen);
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid layered artifact: ") + e.what());
    }
}

LayeredCode seed_code(std::size_t k0, double epsilon, double rate, std::uint64_t seed,
                      std::size_t max_attempts) {
    if (k0 < 1 || k0 > 20) throw DomainError("seed_code supports 1 <= k0 <= 20");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("seed_code requires 0 < eps < 1/2");
    if (!(rate > 0.0 && rate <= 1.0)) throw DomainError("seed_code requires 0 < rate <= 1");
    const auto length =
        static_cast<std::size_t>(ceil_int(static_cast<double>(k0) / rate));
    const auto required = static_cast<std::size_t>(
        std::max<std::int64_t>(1, ceil_int(2.0 * epsilon * static_cast<double>(length))));

    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        SeededRandomSource rng(derive_seed(seed, attempt - 1));
        std::vector<BitVector> generator;
        generator.reserve(k0);
        for (std::size_t m = 0; m < k0; ++m) generator.push_back(rng.next_bits(length));

        // Exhaustive minimum-weight scan over all nonzero messages, Gray
        // code order so each step is one row xor.
        bool ok = true;
        BitVector acc(length);
        std::uint64_t gray = 0;
        for (std::uint64_t c = 1; c < (std::uint64_t{1} << k0); ++c) {
            const std::uint64_t next_gray = c ^ (c >> 1);
            const auto flipped = static_cast<std::size_t>(std::countr_zero(gray ^ next_gray));
            gray = next_gray;
            acc.xor_in(generator[flipped]);
            if (acc.weight() < required) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        Segment seg;
        seg.start = 0;
        seg.length = length;
        seg.payload = BasePayload{std::move(generator)};
        return LayeredCode(epsilon, {std::move(seg)}, k0, length);
    }
    throw ConstructionFailedError("seed_code: no generator reached distance " +
                                      std::to_string(required),
                                  max_attempts);
}

LayeredCode extend(const LayeredCode& base, const LayeredPlan& plan) {
    plan.validate();
    if (plan.epsilon != base.epsilon()) {
        throw DomainError("extension epsilon must match the base code");
    }
    const std::size_t subset_n = plan.subset_code->params().n;
    const std::size_t old_mlen = base.message_length();
    const std::size_t old_clen = base.codeword_length();

    std::vector<Segment> segments = base.segments();
    std::size_t cursor = old_clen;
    // Message layout of the extension: B_1 .. B_{ell-1} then
    // b_1 .. b_{ell-1} (the final block).
    const std::size_t blocks_begin = old_mlen;
    const std::size_t subs_begin = old_mlen + (plan.ell - 1) * plan.block_bits;
    for (std::size_t jblk = 1; jblk + 1 <= plan.ell; ++jblk) {
        SubsetPayload payload;
        payload.code = plan.subset_code;
        payload.code_ref = plan.subset_code_ref.empty() ? "inline" : plan.subset_code_ref;
        payload.block_index = jblk;
        payload.block_offset = blocks_begin + (jblk - 1) * plan.block_bits;
        payload.block_bits = plan.block_bits;
        payload.sub_offset = subs_begin + (jblk - 1) * plan.sub_bits;
        payload.sub_bits = plan.sub_bits;
        Segment seg;
        seg.start = cursor;
        seg.length = subset_n;
        seg.payload = std::move(payload);
        segments.push_back(std::move(seg));
        cursor += subset_n;
    }

    // Rate accounting identity for one extension.
    const std::size_t new_mlen = old_mlen + plan.message_growth();
    if (subs_begin + (plan.ell - 1) * plan.sub_bits != new_mlen) {
        throw DomainError("extension partition arithmetic is inconsistent");
    }

    SystematicChecksum cs = make_checksum(cursor, plan.checksum_delta, plan.seed,
                                          plan.checksum_max_attempts);
    Segment cseg;
    cseg.start = cursor;
    cseg.length = cs.parity_rows();
    cseg.payload = ChecksumPayload{std::move(cs)};
    cursor += cseg.length;
    segments.push_back(std::move(cseg));

    return LayeredCode(base.epsilon(), std::move(segments), new_mlen, cursor);
}

VerificationReport verify_layered(const LayeredCode& code, std::uint64_t work_cap) {
    const std::size_t m = code.message_length();
    const std::size_t n = code.codeword_length();
    VerificationReport report;
    if (m >= 32 || (std::uint64_t{1} << (2 * m)) > work_cap) {
        throw ScaleExceededError("verify_layered: pairwise scan exceeds the work cap");
    }

    // Message index c enumerates messages in lexicographic order: message
    // bit t is bit (m-1-t) of c.
    const std::uint64_t count = std::uint64_t{1} << m;
    auto message_of = [m](std::uint64_t c) {
        BitVector msg(m);
        for (std::size_t t = 0; t < m; ++t) {
            if ((c >> (m - 1 - t)) & 1) msg.set(t);
        }
        return msg;
    };

    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> codewords(count * words);
    for (std::uint64_t c = 0; c < count; ++c) {
        const BitVector cw = code.encode(message_of(c));
        for (std::size_t w = 0; w < words; ++w) codewords[c * words + w] = cw.words()[w];
    }

    // Recoverability claim per prefix length; at full length the whole
    // message is claimed.
    std::vector<std::size_t> claim(n + 1, 0);
    for (std::size_t j = 1; j <= n; ++j) claim[j] = code.decodable_prefix_length(j);
    claim[n] = m;
    std::vector<std::size_t> required(n + 1, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        required[j] = static_cast<std::size_t>(
            std::max<std::int64_t>(1, ceil_int(code.epsilon() * static_cast<double>(j))));
    }
    // jmin[p]: first prefix length whose claim covers message bit p
    // (1-based); claims are monotone.
    std::vector<std::size_t> jmin(m + 1, n + 1);
    for (std::size_t p = 1; p <= m; ++p) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (claim[j] >= p) {
                jmin[p] = j;
                break;
            }
        }
    }
    // The prefix weight is monotone in j and required() is a step
    // function, so it is enough to test each distinct threshold at the
    // first j where it applies.
    std::vector<std::vector<std::size_t>> check_points(m + 1);
    for (std::size_t p = 1; p <= m; ++p) {
        if (jmin[p] > n) continue;
        check_points[p].push_back(jmin[p]);
        for (std::size_t j = jmin[p] + 1; j <= n; ++j) {
            if (required[j] > required[j - 1]) check_points[p].push_back(j);
        }
    }
    auto prefix_weight = [&](const std::uint64_t* a, const std::uint64_t* b, std::size_t j) {
        std::size_t w = 0;
        std::size_t full = j >> 6;
        for (std::size_t k = 0; k < full; ++k) w += std::popcount(a[k] ^ b[k]);
        if (j & 63) {
            w += std::popcount((a[full] ^ b[full]) & ((std::uint64_t{1} << (j & 63)) - 1));
        }
        return w;
    };

    for (std::uint64_t ca = 0; ca < count; ++ca) {
        const std::uint64_t* a = &codewords[ca * words];
        for (std::uint64_t cb = ca + 1; cb < count; ++cb) {
            const std::uint64_t* b = &codewords[cb * words];
            // First differing message bit, 1-based. Messages are the
            // big-endian bits of the counters, so the highest differing
            // counter bit is the earliest message position.
            const int high = 63 - std::countl_zero(ca ^ cb);
            const std::size_t p = m - static_cast<std::size_t>(high);
            bool suspicious = false;
            for (const std::size_t j : check_points[p]) {
                if (prefix_weight(a, b, j) < required[j]) {
                    suspicious = true;
                    break;
                }
            }
            if (!suspicious) continue;
            // Rescan every j to report the earliest violation.
            for (std::size_t j = jmin[p]; j <= n; ++j) {
                const std::size_t d = prefix_weight(a, b, j);
                if (d < required[j]) {
                    report.passed = false;
                    Counterexample ce;
                    ce.i = p;
                    ce.j = j;
                    ce.difference = message_of(ca);
                    ce.second = message_of(cb);
                    ce.achieved_distance = d;
                    ce.required_distance = static_cast<double>(required[j]);
                    ce.note = "codeword prefixes too close for the claimed recoverable prefix";
                    report.counterexample = ce;
                    return report;
                }
            }
        }
    }
    return report;
}

}  // namespace streamcode::layered
