#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loralink/tdma.hpp"

namespace loralink::uplink {

/// One write to a ThingSpeak-style channel.
struct ChannelUpdate {
  std::string api_key;
  std::map<int, double> fields;  // field index 1..8 → value
  std::optional<std::int64_t> created_at;  // Unix seconds, UTC

  friend bool operator==(const ChannelUpdate&, const ChannelUpdate&) = default;
};

struct RequestDescriptor {
  std::string method;
  std::string path;
  std::string query;

  /// "GET /update?api_key=…&field1=…"
  std::string request_line() const;
};

RequestDescriptor format_update(const ChannelUpdate& update);

std::string percent_encode(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_iso8601(std::int64_t unix_seconds);
std::int64_t parse_iso8601(std::string_view text);

struct FieldTarget {
  std::string api_key;
  int field = 1;
};

using KeyMap = std::map<tdma::SyncWord, FieldTarget>;

/// One update per rx_ok event, in timeline order, stamped with
/// epoch + floor(t_ns / 1e9).
std::vector<ChannelUpdate> bridge_sim_report(const tdma::SimReport& report,
                                             const KeyMap& key_map,
                                             std::int64_t epoch_unix_s);

class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(const ChannelUpdate& update) = 0;
};

/// Writes `<ISO8601> UPLINK <request line>` per update. Updates without
/// created_at are stamped with `now`.
class DryRunTransport final : public Transport {
 public:
  explicit DryRunTransport(std::ostream& log,
                           std::function<std::int64_t()> now = nullptr);
  void send(const ChannelUpdate& update) override;

 private:
  std::ostream& log_;
  std::function<std::int64_t()> now_;
};

/// Enforces a minimum wall-clock spacing between sends.
class Throttle {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;
  using Sleeper = std::function<void(std::chrono::steady_clock::duration)>;

  explicit Throttle(std::chrono::milliseconds min_spacing, Clock clock = nullptr,
                    Sleeper sleep = nullptr);

  /// Blocks until the next send is allowed, then records it.
  void wait();

 private:
  std::chrono::milliseconds min_spacing_;
  Clock clock_;
  Sleeper sleep_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

inline constexpr std::chrono::milliseconds kLiveMinSpacing{15000};
inline constexpr const char* kApiKeyEnv = "UPLINK_API_KEY";

/// Real HTTP sender. The write key comes from UPLINK_API_KEY and replaces
/// whatever key the update carries.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::string host = "http://api.thingspeak.com",
                         std::chrono::milliseconds min_spacing = kLiveMinSpacing);
  ~HttpTransport() override;

  void send(const ChannelUpdate& update) override;

 private:
  std::string host_;
  std::string api_key_;
  Throttle throttle_;
};

/// Sends every update in order; returns the count sent.
std::size_t publish(const std::vector<ChannelUpdate>& updates, Transport& transport);

}  // namespace loralink::uplink
