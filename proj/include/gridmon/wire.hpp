#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridmon/errors.hpp"
#include "gridmon/gossip.hpp"

namespace gridmon {

/// Canonical encoding of an exchanged estimate window, used for message logs
/// and cross-implementation test vectors.
///
/// Byte layout (all integers little-endian):
///   sender      u32
///   time        u64   clock t of the sending table
///   window_len  u16   number of tau slots, oldest first; slot i holds
///                     tau = time - window_len + 1 + i
///   n_zones     u16
///   payload     ceil(window_len * n_zones / 8) bytes; bits ordered tau-major
///               then zone-major, little-endian bit order within each byte,
///               zero-padded to the byte boundary
struct GossipMessage {
  std::uint32_t sender = 0;
  std::uint64_t time = 0;
  std::uint16_t window_len = 0;
  std::uint16_t n_zones = 0;
  std::vector<std::uint8_t> payload;
};

namespace detail {

inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t offset,
                            int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{in[offset + i]} << (8 * i);
  return v;
}

}  // namespace detail

inline std::size_t payload_bytes(std::uint32_t window_len, std::uint32_t n_zones) {
  return (static_cast<std::size_t>(window_len) * n_zones + 7) / 8;
}

/// Packs a table's active window into the canonical message.
inline GossipMessage encode_message(const EstimateTable& table) {
  GossipMessage msg;
  msg.sender = table.agent_id();
  msg.n_zones = static_cast<std::uint16_t>(table.n_zones());
  if (table.n_zones() > 0xffff)
    throw ContractError("encode_message: n_zones exceeds u16");
  if (!table.started()) {
    msg.time = 0;
    msg.window_len = 0;
    return msg;
  }
  if (table.window_size() > 0xffff)
    throw ContractError("encode_message: window exceeds u16");
  msg.time = table.clock();
  msg.window_len = static_cast<std::uint16_t>(table.window_size());
  msg.payload.assign(payload_bytes(msg.window_len, msg.n_zones), 0);
  std::size_t bit = 0;
  for (std::uint64_t tau = table.window_lo(); tau <= table.clock(); ++tau) {
    for (std::uint32_t m = 0; m < table.n_zones(); ++m, ++bit)
      if (table.estimate(tau, m)) msg.payload[bit / 8] |= std::uint8_t(1u << (bit % 8));
  }
  return msg;
}

/// Unpacks the window contents, oldest slot first. Rejects payloads whose
/// length does not match the header or whose padding bits are nonzero.
inline std::vector<std::vector<std::uint8_t>> decode_message(const GossipMessage& msg) {
  const std::size_t expected = payload_bytes(msg.window_len, msg.n_zones);
  if (msg.payload.size() != expected)
    throw DecodeError("gossip message: payload is " + std::to_string(msg.payload.size()) +
                      " bytes, expected " + std::to_string(expected));
  std::vector<std::vector<std::uint8_t>> window(
      msg.window_len, std::vector<std::uint8_t>(msg.n_zones, 0));
  std::size_t bit = 0;
  for (std::uint16_t i = 0; i < msg.window_len; ++i)
    for (std::uint16_t m = 0; m < msg.n_zones; ++m, ++bit)
      window[i][m] = (msg.payload[bit / 8] >> (bit % 8)) & 1u;
  const std::size_t used = static_cast<std::size_t>(msg.window_len) * msg.n_zones;
  for (std::size_t b = used; b < expected * 8; ++b)
    if ((msg.payload[b / 8] >> (b % 8)) & 1u)
      throw DecodeError("gossip message: nonzero padding bit");
  return window;
}

inline std::vector<std::uint8_t> serialize(const GossipMessage& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + msg.payload.size());
  detail::put_le(out, msg.sender, 4);
  detail::put_le(out, msg.time, 8);
  detail::put_le(out, msg.window_len, 2);
  detail::put_le(out, msg.n_zones, 2);
  out.insert(out.end(), msg.payload.begin(), msg.payload.end());
  return out;
}

inline GossipMessage parse_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw DecodeError("gossip message: truncated header");
  GossipMessage msg;
  msg.sender = static_cast<std::uint32_t>(detail::get_le(bytes, 0, 4));
  msg.time = detail::get_le(bytes, 4, 8);
  msg.window_len = static_cast<std::uint16_t>(detail::get_le(bytes, 12, 2));
  msg.n_zones = static_cast<std::uint16_t>(detail::get_le(bytes, 14, 2));
  msg.payload.assign(bytes.begin() + 16, bytes.end());
  if (msg.payload.size() != payload_bytes(msg.window_len, msg.n_zones))
    throw DecodeError("gossip message: payload length does not match header");
  return msg;
}

inline std::string hex_dump(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

}  // namespace gridmon
