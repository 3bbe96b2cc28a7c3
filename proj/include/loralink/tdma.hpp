#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loralink/dataset.hpp"
#include "loralink/phy.hpp"
#include "loralink/types.hpp"

namespace loralink::tdma {

/// 16-bit node identifier, always rendered as 4 uppercase hex digits.
class SyncWord {
 public:
  constexpr SyncWord() = default;
  constexpr explicit SyncWord(std::uint16_t value) : value_(value) {}

  constexpr std::uint16_t value() const noexcept { return value_; }
  std::string hex() const;

  /// Accepts exactly four hex digits, optionally prefixed with 0x.
  static SyncWord parse(std::string_view text);

  friend constexpr auto operator<=>(SyncWord, SyncWord) = default;

 private:
  std::uint16_t value_ = 0;
};

/// Stand-in for the ultrasonic ranger: uniform integer distances in cm.
struct PayloadSource {
  std::uint64_t seed = 0;
  int min_cm = 2;
  int max_cm = 400;
};

struct NodeSpec {
  SyncWord sync_word;
  RadioConfig config;
  phy::FrameParams frame;
  PayloadSource payload;
};

using Nanoseconds = std::int64_t;

Nanoseconds to_ns(double seconds);

/// Airtime of the node's frame, rounded up to whole nanoseconds.
Nanoseconds airtime_ns(const NodeSpec& node);

struct SlotSchedule {
  Nanoseconds slot_ns = 0;
  Nanoseconds guard_ns = 0;
  std::vector<std::size_t> order;  // indices into the node list

  Nanoseconds period_ns() const noexcept {
    return static_cast<Nanoseconds>(order.size()) * (slot_ns + guard_ns);
  }
};

SlotSchedule build_schedule(std::span<const NodeSpec> nodes, double slot_duration_s,
                            double guard_s);

/// 2x the longest node airtime, rounded up to a whole millisecond.
double default_slot_duration_s(std::span<const NodeSpec> nodes);
inline constexpr double kDefaultGuardS = 0.010;

struct SimOptions {
  int frames_per_slot = 1;
  /// Connection set-up time between slot_open and the first tx_start.
  double handshake_s = 0.0;
};

enum class EventKind { slot_open, tx_start, tx_end, rx_ok, rx_drop, slot_close };

std::string_view event_name(EventKind kind) noexcept;

struct Event {
  Nanoseconds t_ns = 0;
  EventKind kind = EventKind::slot_open;
  SyncWord sync_word;
  /// Frame sequence number and sensor reading; absent on slot events.
  std::optional<std::uint64_t> seq;
  std::optional<std::int64_t> value;

  friend bool operator==(const Event&, const Event&) = default;
};

struct NodeStats {
  SyncWord sync_word;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t packets_lost = 0;
  /// Empty when the node never got a slot.
  std::optional<double> measured_loss_pct;

  friend bool operator==(const NodeStats&, const NodeStats&) = default;
};

struct SimReport {
  std::vector<NodeStats> nodes;
  std::vector<Event> timeline;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Runs every slot that opens strictly before `duration_s`; a slot that has
/// opened runs to completion. Receptions are independent Bernoulli drops
/// drawn from one mt19937_64 stream seeded with `seed`.
SimReport run_simulation(std::span<const NodeSpec> nodes, const SlotSchedule& schedule,
                         std::span<const double> drop_probability, double duration_s,
                         std::uint64_t seed, const SimOptions& options = {});

/// loss_pct / 100 of the node's (sf, bw) cell.
double drop_model_from_table(const dataset::MeasurementTable& table, const NodeSpec& node);

void write_report(const SimReport& report, std::ostream& out);
std::string serialize_report(const SimReport& report);
SimReport read_report(std::istream& in);
SimReport parse_report(std::string_view text);

}  // namespace loralink::tdma
