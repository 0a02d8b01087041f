#include "gridmon/wire.hpp"

#include <gtest/gtest.h>

#include "gridmon/rng.hpp"

using namespace gridmon;

namespace {

EstimateTable table_with_window(std::uint32_t agent,
                                const std::vector<std::vector<std::uint8_t>>& window,
                                std::uint64_t retention) {
  EstimateTable t(agent, static_cast<std::uint32_t>(window.empty() ? 1 : window[0].size()),
                  retention, 1000);
  for (std::uint64_t i = 0; i < window.size(); ++i) t.init_slot(i, window[i]);
  return t;
}

TEST(Wire, WorkedExampleBitPacking) {
  // window_len=2, M=3, values [[1,0,1],[0,1,0]]: bit stream 1,0,1,0,1,0 in
  // little-endian bit order packs to the single byte 0b00010101.
  const auto t = table_with_window(7, {{1, 0, 1}, {0, 1, 0}}, 1);
  const GossipMessage msg = encode_message(t);
  EXPECT_EQ(msg.sender, 7u);
  EXPECT_EQ(msg.time, 1u);
  EXPECT_EQ(msg.window_len, 2u);
  EXPECT_EQ(msg.n_zones, 3u);
  ASSERT_EQ(msg.payload.size(), 1u);
  EXPECT_EQ(msg.payload[0], 0b00010101);
}

TEST(Wire, EmptyWindowHasEmptyPayload) {
  EstimateTable t(0, 4, 2, 10);  // never started
  const GossipMessage msg = encode_message(t);
  EXPECT_EQ(msg.window_len, 0u);
  EXPECT_EQ(msg.payload.size(), 0u);
  EXPECT_TRUE(decode_message(msg).empty());
}

TEST(Wire, HeaderSerializesLittleEndian) {
  GossipMessage msg;
  msg.sender = 0x01020304u;
  msg.time = 0x0a0b0c0d0e0f1011ull;
  msg.window_len = 0x2122;
  msg.n_zones = 0x3132;
  msg.payload.assign(payload_bytes(msg.window_len, msg.n_zones), 0);
  const auto bytes = serialize(msg);
  const std::vector<std::uint8_t> head(bytes.begin(), bytes.begin() + 16);
  EXPECT_EQ(head, (std::vector<std::uint8_t>{0x04, 0x03, 0x02, 0x01, 0x11, 0x10, 0x0f,
                                             0x0e, 0x0d, 0x0c, 0x0b, 0x0a, 0x22, 0x21,
                                             0x32, 0x31}));
}

TEST(Wire, DecodeRejectsWrongPayloadLength) {
  GossipMessage msg;
  msg.window_len = 2;
  msg.n_zones = 3;
  msg.payload = {0x15, 0x00};  // one byte too many
  EXPECT_THROW(decode_message(msg), DecodeError);
}

TEST(Wire, DecodeRejectsNonzeroPadding) {
  GossipMessage msg;
  msg.window_len = 2;
  msg.n_zones = 3;
  msg.payload = {0xd5};  // bit 6 set past the 6 used bits
  EXPECT_THROW(decode_message(msg), DecodeError);
}

TEST(Wire, ParseRejectsTruncatedHeader) {
  const std::vector<std::uint8_t> bytes(15, 0);
  EXPECT_THROW(parse_message(bytes), DecodeError);
}

TEST(Wire, ParseRejectsLengthMismatch) {
  GossipMessage msg;
  msg.window_len = 4;
  msg.n_zones = 4;
  msg.payload.assign(2, 0);
  auto bytes = serialize(msg);
  bytes.push_back(0);  // trailing garbage
  EXPECT_THROW(parse_message(bytes), DecodeError);
}

TEST(Wire, RoundTripIdentityOnRandomWindows) {
  RngStream rng(424242);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::uint32_t n_zones = 1 + static_cast<std::uint32_t>(uniform_below(rng, 9));
    const std::uint64_t retention = uniform_below(rng, 6);
    const std::uint64_t len = 1 + uniform_below(rng, retention + 1);
    std::vector<std::vector<std::uint8_t>> window(len);
    for (auto& slot : window) {
      slot.resize(n_zones);
      for (auto& b : slot) b = static_cast<std::uint8_t>(uniform_below(rng, 2));
    }
    const auto table = table_with_window(
        static_cast<std::uint32_t>(uniform_below(rng, 1000)), window, retention);

    const GossipMessage msg = encode_message(table);
    const auto bytes = serialize(msg);
    const GossipMessage back = parse_message(bytes);
    EXPECT_EQ(back.sender, msg.sender);
    EXPECT_EQ(back.time, msg.time);
    EXPECT_EQ(back.window_len, msg.window_len);
    EXPECT_EQ(back.n_zones, msg.n_zones);
    EXPECT_EQ(back.payload, msg.payload);
    EXPECT_EQ(decode_message(back), window);
  }
}

TEST(Wire, HexDumpIsLowercasePairs) {
  const std::vector<std::uint8_t> bytes = {0x00, 0xff, 0x1a};
  EXPECT_EQ(hex_dump(bytes), "00ff1a");
}

}  // namespace
