#pragma once

// Fragmentation of arbitrary data into fixed-size radio frames, the
// byte-exact wire codec, and reassembly with duplicate suppression.
//
// Wire layout (big-endian, frame_bytes total):
//   bytes 0-1  msg_id       per-source message sequence number
//   byte  2    frag_index   0-based fragment index
//   byte  3    frag_total   fragment count, >= 1
//   byte  4    src_node     originating node index
//   byte  5    payload_len  0 .. frame_bytes - 6
//   bytes 6..  payload, then zero padding up to frame_bytes
//
// The default 32-byte frame leaves 26 bytes of payload per fragment. The
// frame size is treated as the total over-the-air unit, header included.
// There is no per-frame CRC; channel loss is modeled at the link layer.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "satdtn/types.hpp"

namespace satdtn {

inline constexpr std::size_t kFragHeaderBytes = 6;
inline constexpr std::size_t kDefaultFrameBytes = 32;

class ProtoError : public std::runtime_error {
public:
    enum class Kind { DatumTooLarge, BadFrameSize, PayloadOverflow };
    ProtoError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
    Kind kind;
};

struct FragmentHeader {
    std::uint16_t msg_id = 0;
    std::uint8_t frag_index = 0;
    std::uint8_t frag_total = 1;
    std::uint8_t src_node = 0;
    std::uint8_t payload_len = 0;

    bool operator==(const FragmentHeader&) const = default;
};

struct Fragment {
    FragmentHeader header;
    std::vector<std::uint8_t> payload;

    bool operator==(const Fragment&) const = default;
};

// Split data into fragments of (frame_bytes - 6) payload bytes each, in
// index order. Zero-length data yields one fragment with payload_len 0.
// Throws ProtoError{BadFrameSize} if frame_bytes < 7 and
// ProtoError{DatumTooLarge} if the data needs more than 255 fragments.
std::vector<Fragment> fragment_datum(std::uint8_t src_node, std::uint16_t msg_id,
                                     std::span<const std::uint8_t> data,
                                     std::size_t frame_bytes = kDefaultFrameBytes);

// Serialize a fragment to exactly frame_bytes bytes.
// Throws ProtoError{PayloadOverflow} if the payload does not fit.
std::vector<std::uint8_t> encode_frame(const Fragment& f,
                                       std::size_t frame_bytes = kDefaultFrameBytes);

enum class DecodeError { BadLength, BadHeader };

const char* decode_error_name(DecodeError e);

// Inverse of encode_frame. Trailing padding is ignored. Returns BadLength
// if the input is not exactly frame_bytes long, BadHeader if the header
// fields are inconsistent (frag_total == 0, frag_index >= frag_total, or
// payload_len beyond capacity).
std::variant<Fragment, DecodeError> decode_frame(std::span<const std::uint8_t> wire,
                                                 std::size_t frame_bytes = kDefaultFrameBytes);

enum class IngestKind { Duplicate, Stored, Completed, Conflict };

struct IngestResult {
    IngestKind kind;
    std::vector<std::uint8_t> data; // set iff kind == Completed
};

// Per-destination reassembly state, keyed by (src_node, msg_id). Buffers
// whose fragments disagree on frag_total are dropped whole (no CRC, so a
// total mismatch is unrecoverable). Completed buffers are removed at
// completion, but the store keeps a note of what was completed (per-index
// payload hashes) so redundant copies arriving late still classify as
// Duplicate. A reused msg_id carrying different payload ousts the note and
// starts a fresh message. evict_stale ages out both partial buffers and
// completion notes.
class ReassemblyStore {
public:
    using Key = std::pair<std::uint8_t, std::uint16_t>; // (src_node, msg_id)

    IngestResult ingest(const Fragment& f, TimeMs now);

    // Remove partial buffers idle for strictly longer than max_age and
    // report their keys. Aged completion notes are purged silently.
    // Throws std::invalid_argument if max_age <= 0.
    std::vector<Key> evict_stale(TimeMs now, DurationMs max_age);

    // Number of partial (incomplete) buffers.
    std::size_t size() const { return buffers_.size(); }
    bool has(std::uint8_t src, std::uint16_t msg_id) const {
        return buffers_.count(Key{src, msg_id}) != 0;
    }

private:
    struct Buffer {
        std::uint8_t frag_total = 0;
        std::map<std::uint8_t, std::vector<std::uint8_t>> slots;
        TimeMs first_seen = 0;
        TimeMs last_update = 0;
    };
    struct CompletedNote {
        std::uint8_t frag_total = 0;
        std::vector<std::uint64_t> index_hash;
        TimeMs completed_at = 0;
    };
    std::map<Key, Buffer> buffers_;
    std::map<Key, CompletedNote> completed_;
};

} // namespace satdtn
