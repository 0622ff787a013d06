#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "satdtn/fragproto.hpp"
#include "satdtn/rng.hpp"

using namespace satdtn;

namespace {

std::vector<std::uint8_t> bytes_from_hex(const std::string& hex) {
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
    return out;
}

std::vector<std::uint8_t> random_bytes(SplitMix64& rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.next_below(256));
    return out;
}

// Feed every fragment of `data`, each duplicated `copies` times, to a fresh
// store in a seeded shuffle order. Returns the reassembled bytes.
std::vector<std::uint8_t> roundtrip(const std::vector<std::uint8_t>& data, SplitMix64& rng,
                                    int copies = 4) {
    auto frags = fragment_datum(9, 321, data);
    std::vector<std::vector<std::uint8_t>> wires;
    for (const auto& f : frags)
        for (int c = 0; c < copies; ++c) wires.push_back(encode_frame(f));
    // Fisher-Yates with the test stream
    for (std::size_t i = wires.size(); i > 1; --i)
        std::swap(wires[i - 1], wires[rng.next_below(i)]);

    ReassemblyStore store;
    std::vector<std::uint8_t> result;
    bool completed = false;
    TimeMs now = 0;
    for (const auto& w : wires) {
        auto decoded = decode_frame(w);
        REQUIRE(std::holds_alternative<Fragment>(decoded));
        auto r = store.ingest(std::get<Fragment>(decoded), ++now);
        REQUIRE(r.kind != IngestKind::Conflict);
        if (r.kind == IngestKind::Completed) {
            REQUIRE_FALSE(completed); // completes exactly once
            completed = true;
            result = std::move(r.data);
        }
    }
    REQUIRE(completed);
    REQUIRE(store.size() == 0);
    return result;
}

} // namespace

TEST_CASE("fragment_datum sizing") {
    SplitMix64 rng(1);

    auto data = random_bytes(rng, 100);
    auto frags = fragment_datum(1, 7, data);
    REQUIRE(frags.size() == 4);
    CHECK(frags[0].header.payload_len == 26);
    CHECK(frags[1].header.payload_len == 26);
    CHECK(frags[2].header.payload_len == 26);
    CHECK(frags[3].header.payload_len == 22);
    for (const auto& f : frags) {
        CHECK(f.header.frag_total == 4);
        CHECK(f.header.msg_id == 7);
        CHECK(f.header.src_node == 1);
    }

    frags = fragment_datum(1, 8, std::span<const std::uint8_t>{});
    REQUIRE(frags.size() == 1);
    CHECK(frags[0].header.frag_total == 1);
    CHECK(frags[0].header.payload_len == 0);

    data = random_bytes(rng, 26);
    frags = fragment_datum(1, 9, data);
    REQUIRE(frags.size() == 1);
    CHECK(frags[0].header.payload_len == 26);

    data = random_bytes(rng, 6631);
    CHECK_THROWS_AS(fragment_datum(1, 10, data), ProtoError);
    try {
        fragment_datum(1, 10, data);
    } catch (const ProtoError& e) {
        CHECK(e.kind == ProtoError::Kind::DatumTooLarge);
    }

    data = random_bytes(rng, 6630); // exactly 255 fragments
    CHECK(fragment_datum(1, 11, data).size() == 255);

    CHECK_THROWS_AS(fragment_datum(1, 12, data, 6), ProtoError);
}

TEST_CASE("encode_frame layout") {
    Fragment f;
    f.header = FragmentHeader{1, 0, 1, 7, 2};
    f.payload = {0x41, 0x42};
    auto wire = encode_frame(f);
    REQUIRE(wire.size() == 32);
    const std::uint8_t expect[8] = {0x00, 0x01, 0x00, 0x01, 0x07, 0x02, 0x41, 0x42};
    for (int i = 0; i < 8; ++i) CHECK(wire[i] == expect[i]);
    for (int i = 8; i < 32; ++i) CHECK(wire[i] == 0);

    Fragment zero;
    zero.header = FragmentHeader{0, 0, 1, 0, 0};
    wire = encode_frame(zero);
    REQUIRE(wire.size() == 32);
    for (int i = 0; i < 32; ++i) CHECK(wire[i] == (i == 3 ? 1 : 0));

    Fragment overflow;
    overflow.header = FragmentHeader{1, 0, 1, 7, 27};
    overflow.payload.assign(27, 0xaa);
    CHECK_THROWS_AS(encode_frame(overflow), ProtoError);
}

TEST_CASE("decode_frame validation") {
    Fragment f;
    f.header = FragmentHeader{1, 0, 1, 7, 2};
    f.payload = {0x41, 0x42};
    auto decoded = decode_frame(encode_frame(f));
    REQUIRE(std::holds_alternative<Fragment>(decoded));
    CHECK(std::get<Fragment>(decoded) == f);

    std::vector<std::uint8_t> short_wire(31, 0);
    auto err = decode_frame(short_wire);
    REQUIRE(std::holds_alternative<DecodeError>(err));
    CHECK(std::get<DecodeError>(err) == DecodeError::BadLength);

    std::vector<std::uint8_t> zero_total(32, 0); // frag_total == 0
    err = decode_frame(zero_total);
    REQUIRE(std::holds_alternative<DecodeError>(err));
    CHECK(std::get<DecodeError>(err) == DecodeError::BadHeader);
}

TEST_CASE("wire conformance vectors") {
    std::ifstream in(std::string(SATDTN_FIXTURE_DIR) + "/frame_vectors.hex");
    REQUIRE(in.good());
    std::string line;
    int vectors = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag, hex;
        ss >> tag >> hex;
        auto wire = bytes_from_hex(hex);
        auto decoded = decode_frame(wire);
        ++vectors;
        if (tag == "ok") {
            unsigned msg_id, idx, total, src;
            std::string payload_hex;
            ss >> msg_id >> idx >> total >> src >> payload_hex;
            REQUIRE(std::holds_alternative<Fragment>(decoded));
            const Fragment& f = std::get<Fragment>(decoded);
            CHECK(f.header.msg_id == msg_id);
            CHECK(f.header.frag_index == idx);
            CHECK(f.header.frag_total == total);
            CHECK(f.header.src_node == src);
            auto payload = payload_hex == "-" ? std::vector<std::uint8_t>{}
                                              : bytes_from_hex(payload_hex);
            CHECK(f.payload == payload);
            CHECK(encode_frame(f) == wire); // re-encode is byte exact
        } else {
            std::string reason;
            ss >> reason;
            REQUIRE(std::holds_alternative<DecodeError>(decoded));
            CHECK(decode_error_name(std::get<DecodeError>(decoded)) == reason);
        }
    }
    CHECK(vectors == 8);
}

TEST_CASE("ingest outcomes") {
    SplitMix64 rng(2);

    SUBCASE("four copies of the same fragment") {
        auto frags = fragment_datum(3, 100, random_bytes(rng, 60)); // 3 fragments
        ReassemblyStore store;
        CHECK(store.ingest(frags[0], 1).kind == IngestKind::Stored);
        CHECK(store.ingest(frags[0], 2).kind == IngestKind::Duplicate);
        CHECK(store.ingest(frags[0], 3).kind == IngestKind::Duplicate);
        CHECK(store.ingest(frags[0], 4).kind == IngestKind::Duplicate);
        CHECK(store.size() == 1);
    }

    SUBCASE("single-fragment datum completes immediately") {
        auto data = random_bytes(rng, 10);
        auto frags = fragment_datum(3, 101, data);
        ReassemblyStore store;
        auto r = store.ingest(frags[0], 1);
        CHECK(r.kind == IngestKind::Completed);
        CHECK(r.data == data);
        CHECK(store.size() == 0);
    }

    SUBCASE("all arrival orders of a 3-part message") {
        auto data = random_bytes(rng, 60);
        auto frags = fragment_datum(3, 102, data);
        REQUIRE(frags.size() == 3);
        std::vector<int> order{0, 1, 2};
        std::sort(order.begin(), order.end());
        do {
            ReassemblyStore store;
            std::vector<std::uint8_t> got;
            for (std::size_t i = 0; i < order.size(); ++i) {
                auto r = store.ingest(frags[order[i]], static_cast<TimeMs>(i));
                if (i + 1 < order.size()) {
                    CHECK(r.kind == IngestKind::Stored);
                } else {
                    REQUIRE(r.kind == IngestKind::Completed);
                    got = r.data;
                }
            }
            CHECK(got == data);
        } while (std::next_permutation(order.begin(), order.end()));
    }

    SUBCASE("frag_total disagreement drops the buffer") {
        auto frags = fragment_datum(3, 103, random_bytes(rng, 60));
        ReassemblyStore store;
        CHECK(store.ingest(frags[0], 1).kind == IngestKind::Stored);
        Fragment liar = frags[1];
        liar.header.frag_total = 5;
        CHECK(store.ingest(liar, 2).kind == IngestKind::Conflict);
        CHECK(store.size() == 0);
    }
}

TEST_CASE("eviction") {
    SplitMix64 rng(3);
    ReassemblyStore store;
    auto frags_a = fragment_datum(1, 1, random_bytes(rng, 60));
    auto frags_b = fragment_datum(2, 1, random_bytes(rng, 60));
    store.ingest(frags_a[0], 1000);
    store.ingest(frags_b[0], 1500);
    REQUIRE(store.size() == 2);

    SUBCASE("strictly greater than max_age") {
        // idle exactly max_age stays, one past goes
        CHECK(store.evict_stale(3000, 2000).empty());
        auto evicted = store.evict_stale(3001, 2000);
        REQUIRE(evicted.size() == 1);
        CHECK(evicted[0] == ReassemblyStore::Key{1, 1});
        CHECK(store.size() == 1);
    }

    SUBCASE("fresh buffers retained, two stale reported") {
        auto evicted = store.evict_stale(10'000, 2000);
        CHECK(evicted.size() == 2);
        CHECK(store.size() == 0);
    }

    CHECK_THROWS_AS(store.evict_stale(0, 0), std::invalid_argument);
}

TEST_CASE("roundtrip property with duplicates and shuffling") {
    SplitMix64 rng(20250801);

    // boundary lengths first
    for (std::size_t len : {std::size_t{0}, std::size_t{1}, std::size_t{26}, std::size_t{27},
                            std::size_t{52}, std::size_t{6630}}) {
        auto data = random_bytes(rng, len);
        CHECK(roundtrip(data, rng) == data);
    }

    for (int trial = 0; trial < 1000; ++trial) {
        auto data = random_bytes(rng, rng.next_below(6631));
        auto got = roundtrip(data, rng);
        REQUIRE(got == data);
    }
}

TEST_CASE("idempotence: multiset equals support set") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        auto data = random_bytes(rng, 27 + rng.next_below(200));
        auto frags = fragment_datum(4, static_cast<std::uint16_t>(trial), data);

        // ingest the support set once, in order, leaving the last out
        ReassemblyStore a;
        for (std::size_t i = 0; i + 1 < frags.size(); ++i)
            a.ingest(frags[i], static_cast<TimeMs>(i));

        // ingest a noisy multiset of the same prefix
        ReassemblyStore b;
        TimeMs now = 0;
        for (int rep = 0; rep < 3; ++rep)
            for (std::size_t i = 0; i + 1 < frags.size(); ++i)
                b.ingest(frags[rng.next_below(frags.size() - 1)], ++now);
        for (std::size_t i = 0; i + 1 < frags.size(); ++i) b.ingest(frags[i], ++now);

        // both complete with the final fragment and agree on the data
        auto ra = a.ingest(frags.back(), 1000);
        auto rb = b.ingest(frags.back(), 1000);
        REQUIRE(ra.kind == IngestKind::Completed);
        REQUIRE(rb.kind == IngestKind::Completed);
        CHECK(ra.data == rb.data);
        CHECK(ra.data == data);
    }
}

TEST_CASE("msg_id reuse after completion or eviction") {
    SplitMix64 rng(7);
    auto data1 = random_bytes(rng, 40);
    auto data2 = random_bytes(rng, 40);
    ReassemblyStore store;

    // same (src, msg_id), disjoint lifetimes via completion
    for (const auto& f : fragment_datum(1, 500, data1)) store.ingest(f, 1);
    auto frags2 = fragment_datum(1, 500, data2);
    store.ingest(frags2[0], 10);
    auto r = store.ingest(frags2[1], 11);
    REQUIRE(r.kind == IngestKind::Completed);
    CHECK(r.data == data2);

    // disjoint lifetimes via eviction
    auto frags3 = fragment_datum(1, 501, data1);
    store.ingest(frags3[0], 20);
    store.evict_stale(100'000, 1000);
    CHECK_FALSE(store.has(1, 501));
    auto frags4 = fragment_datum(1, 501, data2);
    store.ingest(frags4[0], 100'001);
    r = store.ingest(frags4[1], 100'002);
    REQUIRE(r.kind == IngestKind::Completed);
    CHECK(r.data == data2);
}
