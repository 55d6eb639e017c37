#include "cachecraft/delivery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cachecraft/enumeration.hpp"
#include "cachecraft/errors.hpp"
#include "cachecraft/evaluator.hpp"

namespace cachecraft {

void Bits::set(std::size_t i, bool value) {
  const auto mask = static_cast<std::uint8_t>(0x80u >> (i % 8));
  if (value) {
    bytes_.at(i / 8) |= mask;
  } else {
    bytes_.at(i / 8) &= static_cast<std::uint8_t>(~mask);
  }
}

Bits Bits::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > size_) throw Error("bit slice out of range");
  Bits out(length);
  if (offset % 8 == 0) {
    std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(offset / 8), out.bytes_.size(),
                out.bytes_.begin());
    if (length % 8 != 0) out.bytes_.back() &= static_cast<std::uint8_t>(0xFFu << (8 - length % 8));
    return out;
  }
  for (std::size_t i = 0; i < length; ++i) {
    if (get(offset + i)) out.set(i, true);
  }
  return out;
}

void Bits::xor_prefix(const Bits& other) {
  const std::size_t n = std::min(bytes_.size(), other.bytes_.size());
  for (std::size_t i = 0; i < n; ++i) bytes_[i] ^= other.bytes_[i];
  if (size_ % 8 != 0 && !bytes_.empty()) {
    bytes_.back() &= static_cast<std::uint8_t>(0xFFu << (8 - size_ % 8));
  }
}

void Bits::pad_to(std::size_t size) {
  if (size <= size_) return;
  size_ = size;
  bytes_.resize((size + 7) / 8, 0);
}

std::string Bits::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (std::uint8_t b : bytes_) {
    out += digits[b >> 4];
    out += digits[b & 0xF];
  }
  return out;
}

std::vector<std::size_t> largest_remainder(const std::vector<double>& sizes, std::size_t total) {
  std::vector<std::size_t> out(sizes.size());
  std::vector<double> frac(sizes.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = std::max(0.0, sizes[i]);
    const double f = std::floor(x);
    out[i] = static_cast<std::size_t>(f);
    frac[i] = x - f;
    assigned += out[i];
  }
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (assigned < total) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t i = 0; assigned < total; i = (i + 1) % order.size()) {
      ++out[order[i]];
      ++assigned;
    }
  } else if (assigned > total) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] < frac[b]; });
    while (assigned > total) {
      for (std::size_t i : order) {
        if (assigned == total) break;
        if (out[i] > 0) {
          --out[i];
          --assigned;
        }
      }
    }
  }
  return out;
}

Bits BitCatalog::subfile(int file, UserSet subset) const {
  const BitRange& r = range(file, subset);
  return files_.at(file).slice(r.offset, r.length);
}

BitCatalog materialize(const SystemConfig& cfg, const Placement& pl, std::int64_t unit_bits,
                       std::uint64_t seed) {
  if (unit_bits < 1) throw ValidationError("unit_bits", "unit_bits must be positive");
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  if (pl.num_users() != K || pl.num_files() != N) {
    throw ValidationError("placement", "placement dimensions do not match the configuration");
  }
  BitCatalog cat;
  cat.num_users_ = K;
  cat.unit_bits_ = unit_bits;
  const std::vector<UserSet> order = canonical_subsets(K);
  std::mt19937_64 rng(seed);
  for (int l = 0; l < N; ++l) {
    const auto bits = static_cast<std::size_t>(
        std::llround(cfg.file_lengths()[l] * static_cast<double>(unit_bits)));
    Bits file(bits);
    for (std::size_t i = 0; i < file.size(); i += 64) {
      const std::uint64_t word = rng();
      for (std::size_t b = 0; b < 64 && i + b < file.size(); ++b) {
        if ((word >> (63 - b)) & 1u) file.set(i + b, true);
      }
    }
    std::vector<double> scaled(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      scaled[i] = pl.size(l, order[i]) * static_cast<double>(unit_bits);
    }
    const std::vector<std::size_t> lengths = largest_remainder(scaled, bits);
    std::vector<BitRange> layout(order.size());
    std::size_t offset = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      layout[order[i]] = {offset, lengths[i]};
      offset += lengths[i];
    }
    cat.files_.push_back(std::move(file));
    cat.layout_.push_back(std::move(layout));
  }
  return cat;
}

std::size_t TransmissionLog::total_bits() const {
  std::size_t total = 0;
  for (const auto& t : transmissions) total += t.payload.size();
  return total;
}

Transmission* TransmissionLog::find(UserSet users) {
  for (auto& t : transmissions) {
    if (t.users == users) return &t;
  }
  return nullptr;
}

namespace {

void check_catalog_demand(const BitCatalog& cat, const DemandVector& d) {
  if (static_cast<int>(d.files.size()) != cat.num_users()) {
    throw ValidationError("d", "demand must have one entry per user");
  }
  for (int f : d.files) {
    if (f < 0 || f >= cat.num_files()) throw ValidationError("d", "demand names an unknown file");
  }
}

const Transmission* find_in(const TransmissionLog& log, UserSet users) {
  for (const auto& t : log.transmissions) {
    if (t.users == users) return &t;
  }
  return nullptr;
}

}  // namespace

TransmissionLog deliver(const BitCatalog& cat, const DemandVector& d) {
  check_catalog_demand(cat, d);
  TransmissionLog log;
  log.demand = d.files;
  for (UserSet s : canonical_subsets(cat.num_users())) {
    if (s == 0) continue;
    Transmission t{s, {}, {}};
    for (int k : members(s)) {
      const SubfileId id{d.files[k], s & ~singleton(k)};
      t.constituents.push_back(id);
      const Bits part = cat.subfile(id.file, id.subset);
      t.payload.pad_to(part.size());
      t.payload.xor_prefix(part);
    }
    if (t.payload.size() > 0) log.transmissions.push_back(std::move(t));
  }
  return log;
}

bool DecodeReport::all_decoded() const {
  return std::all_of(users.begin(), users.end(), [](const UserDecode& u) { return u.decoded; });
}

int DecodeReport::decoded_count() const {
  return static_cast<int>(
      std::count_if(users.begin(), users.end(), [](const UserDecode& u) { return u.decoded; }));
}

DecodeReport decode_all(const BitCatalog& cat, const TransmissionLog& log, const DemandVector& d) {
  check_catalog_demand(cat, d);
  const int K = cat.num_users();
  DecodeReport report;
  const std::vector<UserSet> order = canonical_subsets(K);
  for (int k = 0; k < K; ++k) {
    const int want = d.files[k];
    const Bits& truth = cat.file(want);
    Bits rebuilt(truth.size());
    // Records which transmission supplied each subfile of the rebuilt file.
    std::vector<std::pair<BitRange, UserSet>> sources;
    for (UserSet s : order) {
      const BitRange& r = cat.range(want, s);
      Bits piece;
      UserSet source = s;
      if (contains(s, k)) {
        piece = cat.subfile(want, s);
      } else {
        source = s | singleton(k);
        piece = Bits(r.length);
        if (const Transmission* t = find_in(log, source)) {
          Bits acc = t->payload;
          for (int j : members(source)) {
            if (j == k) continue;
            // The other constituents all contain k, so user k caches them.
            acc.xor_prefix(cat.subfile(d.files[j], source & ~singleton(j)));
          }
          acc.pad_to(r.length);
          piece = acc.slice(0, r.length);
        }
      }
      for (std::size_t i = 0; i < r.length; ++i) {
        if (piece.get(i)) rebuilt.set(r.offset + i, true);
      }
      sources.emplace_back(r, source);
    }
    UserDecode u{k, true, std::nullopt, std::nullopt};
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth.get(i) != rebuilt.get(i)) {
        u.decoded = false;
        u.offset = i;
        for (const auto& [r, src] : sources) {
          if (i >= r.offset && i < r.offset + r.length) u.subset = src;
        }
        break;
      }
    }
    report.users.push_back(u);
  }
  return report;
}

SimulationSummary simulate_all(const SystemConfig& cfg, const Placement& pl,
                               std::int64_t unit_bits, std::uint64_t seed) {
  const double count = demand_count(cfg.num_files(), cfg.num_users());
  if (count > enumeration_cap()) {
    throw LimitError("N^K = " + std::to_string(count) + " exceeds the enumeration cap");
  }
  const BitCatalog cat = materialize(cfg, pl, unit_bits, seed);
  SimulationSummary summary;
  for_each_demand(cfg.popularities(), cfg.num_users(), 0, static_cast<std::uint64_t>(count),
                  [&](const std::vector<int>& files, double prob) {
                    const DemandVector d{files};
                    const TransmissionLog log = deliver(cat, d);
                    const auto bits = static_cast<double>(log.total_bits());
                    ++summary.demands;
                    if (decode_all(cat, log, d).all_decoded()) ++summary.fully_decoded;
                    summary.expected_bits += prob * bits;
                    const double ideal =
                        rate_for_demand(pl, files) * static_cast<double>(unit_bits);
                    summary.max_slack_bits =
                        std::max(summary.max_slack_bits, std::abs(bits - ideal));
                  });
  return summary;
}

Json log_to_json(const TransmissionLog& log, bool payloads) {
  Json demand = Json::array();
  for (int f : log.demand) demand.push_back(f + 1);
  Json list = Json::array();
  for (const auto& t : log.transmissions) {
    Json parts = Json::array();
    for (const auto& c : t.constituents) {
      parts.push_back({{"file", c.file + 1}, {"subset", subset_key(c.subset)}});
    }
    Json entry = {{"users", subset_key(t.users)}, {"bits", t.payload.size()},
                  {"constituents", std::move(parts)}};
    if (payloads) entry["payload"] = t.payload.hex();
    list.push_back(std::move(entry));
  }
  return {{"demand", std::move(demand)},
          {"total_bits", log.total_bits()},
          {"transmissions", std::move(list)}};
}

Json report_to_json(const DecodeReport& report) {
  Json users = Json::array();
  for (const auto& u : report.users) {
    Json entry = {{"user", u.user + 1}, {"decoded", u.decoded}};
    if (u.subset) entry["subset"] = subset_key(*u.subset);
    if (u.offset) entry["offset"] = *u.offset;
    users.push_back(std::move(entry));
  }
  return {{"decoded", report.decoded_count()},
          {"users", std::move(users)}};
}

}  // namespace cachecraft
