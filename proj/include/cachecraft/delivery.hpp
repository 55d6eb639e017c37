#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cachecraft/io.hpp"
#include "cachecraft/model.hpp"

namespace cachecraft {

inline constexpr std::int64_t kDefaultUnitBits = 2400;

// Packed bit string, most significant bit of each byte first. Bits past
// size() in the last byte are always zero.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t size) : size_(size), bytes_((size + 7) / 8, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool get(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1u; }
  void set(std::size_t i, bool value);
  void flip(std::size_t i) { bytes_.at(i / 8) ^= static_cast<std::uint8_t>(0x80u >> (i % 8)); }

  Bits slice(std::size_t offset, std::size_t length) const;
  // XOR of `other` zero-padded or truncated to size().
  void xor_prefix(const Bits& other);
  // Grows to at least `size` bits, padding with zeros.
  void pad_to(std::size_t size);

  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::string hex() const;

  bool operator==(const Bits&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint8_t> bytes_;
};

struct BitRange {
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Integer bit lengths summing to `total`: floors of `sizes`, then one extra
// bit each for the largest fractional parts (or one fewer for the smallest
// when the floors overshoot). Ties go to the earlier entry.
std::vector<std::size_t> largest_remainder(const std::vector<double>& sizes, std::size_t total);

// Files of round(F_l * unit_bits) pseudo-random bits, each split into
// contiguous subfiles in canonical subset order.
class BitCatalog {
 public:
  int num_users() const noexcept { return num_users_; }
  int num_files() const noexcept { return static_cast<int>(files_.size()); }
  std::int64_t unit_bits() const noexcept { return unit_bits_; }

  const Bits& file(int l) const { return files_.at(l); }
  const BitRange& range(int file, UserSet subset) const { return layout_.at(file).at(subset); }
  Bits subfile(int file, UserSet subset) const;

 private:
  friend BitCatalog materialize(const SystemConfig&, const Placement&, std::int64_t,
                                std::uint64_t);
  int num_users_ = 0;
  std::int64_t unit_bits_ = 0;
  std::vector<Bits> files_;
  std::vector<std::vector<BitRange>> layout_;  // [file][subset mask]
};

// Throws ValidationError when dimensions disagree or unit_bits < 1.
BitCatalog materialize(const SystemConfig& cfg, const Placement& pl,
                       std::int64_t unit_bits = kDefaultUnitBits, std::uint64_t seed = 0);

struct SubfileId {
  int file;
  UserSet subset;
};

struct Transmission {
  UserSet users;
  std::vector<SubfileId> constituents;  // one per user in `users`, ascending user
  Bits payload;                         // length = longest constituent
};

// Nonempty transmissions in canonical subset order; empty ones count as 0 bits.
struct TransmissionLog {
  std::vector<int> demand;
  std::vector<Transmission> transmissions;

  std::size_t total_bits() const;
  Transmission* find(UserSet users);
};

TransmissionLog deliver(const BitCatalog& cat, const DemandVector& d);

struct UserDecode {
  int user = 0;
  bool decoded = false;
  // On failure: the transmission carrying the first wrong bit, and that bit's
  // offset within the requested file.
  std::optional<UserSet> subset;
  std::optional<std::size_t> offset;
};

struct DecodeReport {
  std::vector<UserDecode> users;
  bool all_decoded() const;
  int decoded_count() const;
};

// Each user rebuilds its file from its cache plus the log and compares it bit
// for bit with the original.
DecodeReport decode_all(const BitCatalog& cat, const TransmissionLog& log, const DemandVector& d);

struct SimulationSummary {
  std::uint64_t demands = 0;
  std::uint64_t fully_decoded = 0;
  double expected_bits = 0.0;   // popularity-weighted transmitted bits
  double max_slack_bits = 0.0;  // max |bits - rate * unit_bits| over demands
};

// Delivery and decoding for every demand vector. Throws LimitError when N^K
// exceeds enumeration_cap().
SimulationSummary simulate_all(const SystemConfig& cfg, const Placement& pl,
                               std::int64_t unit_bits = kDefaultUnitBits, std::uint64_t seed = 0);

// Payloads are included as hex strings when `payloads` is set.
Json log_to_json(const TransmissionLog& log, bool payloads = false);
Json report_to_json(const DecodeReport& report);

}  // namespace cachecraft
