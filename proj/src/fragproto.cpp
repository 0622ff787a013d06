#include "satdtn/fragproto.hpp"

#include <algorithm>

namespace satdtn {

std::vector<Fragment> fragment_datum(std::uint8_t src_node, std::uint16_t msg_id,
                                     std::span<const std::uint8_t> data,
                                     std::size_t frame_bytes) {
    if (frame_bytes < kFragHeaderBytes + 1)
        throw ProtoError(ProtoError::Kind::BadFrameSize,
                         "fragment_datum: frame_bytes must be >= 7");
    const std::size_t cap = frame_bytes - kFragHeaderBytes;
    if (data.size() > cap * 255)
        throw ProtoError(ProtoError::Kind::DatumTooLarge,
                         "fragment_datum: datum of " + std::to_string(data.size()) +
                             " bytes exceeds " + std::to_string(cap * 255));

    const std::size_t total = data.empty() ? 1 : (data.size() + cap - 1) / cap;
    std::vector<Fragment> out;
    out.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t off = i * cap;
        const std::size_t len = std::min(cap, data.size() - off);
        Fragment f;
        f.header.msg_id = msg_id;
        f.header.frag_index = static_cast<std::uint8_t>(i);
        f.header.frag_total = static_cast<std::uint8_t>(total);
        f.header.src_node = src_node;
        f.header.payload_len = static_cast<std::uint8_t>(len);
        f.payload.assign(data.begin() + off, data.begin() + off + len);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<std::uint8_t> encode_frame(const Fragment& f, std::size_t frame_bytes) {
    if (frame_bytes < kFragHeaderBytes + 1)
        throw ProtoError(ProtoError::Kind::BadFrameSize,
                         "encode_frame: frame_bytes must be >= 7");
    if (f.payload.size() != f.header.payload_len ||
        f.payload.size() > frame_bytes - kFragHeaderBytes)
        throw ProtoError(ProtoError::Kind::PayloadOverflow,
                         "encode_frame: payload does not fit frame");

    std::vector<std::uint8_t> wire(frame_bytes, 0);
    wire[0] = static_cast<std::uint8_t>(f.header.msg_id >> 8);
    wire[1] = static_cast<std::uint8_t>(f.header.msg_id & 0xff);
    wire[2] = f.header.frag_index;
    wire[3] = f.header.frag_total;
    wire[4] = f.header.src_node;
    wire[5] = f.header.payload_len;
    std::copy(f.payload.begin(), f.payload.end(), wire.begin() + kFragHeaderBytes);
    return wire;
}

const char* decode_error_name(DecodeError e) {
    switch (e) {
    case DecodeError::BadLength: return "bad_length";
    case DecodeError::BadHeader: return "bad_header";
    }
    return "unknown";
}

std::variant<Fragment, DecodeError> decode_frame(std::span<const std::uint8_t> wire,
                                                 std::size_t frame_bytes) {
    if (wire.size() != frame_bytes) return DecodeError::BadLength;

    Fragment f;
    f.header.msg_id = static_cast<std::uint16_t>((wire[0] << 8) | wire[1]);
    f.header.frag_index = wire[2];
    f.header.frag_total = wire[3];
    f.header.src_node = wire[4];
    f.header.payload_len = wire[5];

    if (f.header.frag_total == 0) return DecodeError::BadHeader;
    if (f.header.frag_index >= f.header.frag_total) return DecodeError::BadHeader;
    if (f.header.payload_len > frame_bytes - kFragHeaderBytes) return DecodeError::BadHeader;

    f.payload.assign(wire.begin() + kFragHeaderBytes,
                     wire.begin() + kFragHeaderBytes + f.header.payload_len);
    return f;
}

namespace {

std::uint64_t payload_hash(const std::vector<std::uint8_t>& payload) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : payload) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

IngestResult ReassemblyStore::ingest(const Fragment& f, TimeMs now) {
    const Key key{f.header.src_node, f.header.msg_id};

    // Late redundant copy of an already reassembled message?
    if (auto done = completed_.find(key); done != completed_.end()) {
        const CompletedNote& note = done->second;
        if (f.header.frag_total == note.frag_total &&
            payload_hash(f.payload) == note.index_hash[f.header.frag_index])
            return IngestResult{IngestKind::Duplicate, {}};
        // Different content under a reused msg_id: a new message begins.
        completed_.erase(done);
    }

    auto it = buffers_.find(key);
    if (it != buffers_.end() && it->second.frag_total != f.header.frag_total) {
        // Disagreement on the fragment count poisons the whole buffer.
        buffers_.erase(it);
        return IngestResult{IngestKind::Conflict, {}};
    }

    if (it == buffers_.end()) {
        Buffer b;
        b.frag_total = f.header.frag_total;
        b.first_seen = now;
        it = buffers_.emplace(key, std::move(b)).first;
    }

    Buffer& buf = it->second;
    if (buf.slots.count(f.header.frag_index))
        return IngestResult{IngestKind::Duplicate, {}};

    buf.slots.emplace(f.header.frag_index, f.payload);
    buf.last_update = now;

    if (buf.slots.size() == buf.frag_total) {
        std::vector<std::uint8_t> data;
        CompletedNote note;
        note.frag_total = buf.frag_total;
        note.index_hash.resize(buf.frag_total);
        note.completed_at = now;
        for (auto& [idx, payload] : buf.slots) {
            note.index_hash[idx] = payload_hash(payload);
            data.insert(data.end(), payload.begin(), payload.end());
        }
        buffers_.erase(it);
        completed_[key] = std::move(note);
        return IngestResult{IngestKind::Completed, std::move(data)};
    }
    return IngestResult{IngestKind::Stored, {}};
}

std::vector<ReassemblyStore::Key> ReassemblyStore::evict_stale(TimeMs now, DurationMs max_age) {
    if (max_age <= 0) throw std::invalid_argument("evict_stale: max_age must be > 0");
    std::vector<Key> evicted;
    for (auto it = buffers_.begin(); it != buffers_.end();) {
        if (now - it->second.last_update > max_age) {
            evicted.push_back(it->first);
            it = buffers_.erase(it);
        } else {
            ++it;
        }
    }
    for (auto it = completed_.begin(); it != completed_.end();) {
        if (now - it->second.completed_at > max_age)
            it = completed_.erase(it);
        else
            ++it;
    }
    return evicted;
}

} // namespace satdtn
