#include "loralink/uplink.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <thread>

#include <httplib.h>

#include "loralink/error.hpp"

namespace loralink::uplink {

std::string RequestDescriptor::request_line() const {
  return method + " " + path + (query.empty() ? "" : "?" + query);
}

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                            (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                            c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

RequestDescriptor format_update(const ChannelUpdate& update) {
  if (update.fields.empty()) {
    throw Error(ErrorCode::invalid_argument, "channel update has no fields");
  }
  if (update.api_key.empty()) {
    throw Error(ErrorCode::invalid_argument, "channel update has no api key");
  }
  std::string query = "api_key=" + percent_encode(update.api_key);
  for (const auto& [index, value] : update.fields) {
    if (index < 1 || index > 8) {
      throw Error(ErrorCode::invalid_argument,
                  "field index " + std::to_string(index) + " outside 1..8");
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::invalid_argument, "field values must be finite");
    }
    query += "&field" + std::to_string(index) + "=" + percent_encode(format_decimal(value));
  }
  if (update.created_at) {
    query += "&created_at=" + percent_encode(format_iso8601(*update.created_at));
  }
  return {"GET", "/update", std::move(query)};
}

std::string format_iso8601(std::int64_t unix_seconds) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{unix_seconds}};
  const auto day = floor<days>(tp);
  const year_month_day ymd{day};
  const hh_mm_ss hms{tp - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::int64_t parse_iso8601(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ
  auto bad = [&] {
    return ParseError(0, "expected YYYY-MM-DDTHH:MM:SSZ, got '" + std::string(text) + "'");
  };
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    throw bad();
  }
  auto number = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    const auto res = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (res.ec != std::errc{} || res.ptr != text.data() + pos + len) throw bad();
    return v;
  };
  using namespace std::chrono;
  const year_month_day ymd{year{number(0, 4)}, month{static_cast<unsigned>(number(5, 2))},
                           day{static_cast<unsigned>(number(8, 2))}};
  const int hh = number(11, 2), mm = number(14, 2), ss = number(17, 2);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) throw bad();
  const auto tp = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
  return tp.time_since_epoch().count();
}

std::vector<ChannelUpdate> bridge_sim_report(const tdma::SimReport& report,
                                             const KeyMap& key_map,
                                             std::int64_t epoch_unix_s) {
  std::vector<ChannelUpdate> updates;
  for (const auto& event : report.timeline) {
    if (event.kind != tdma::EventKind::rx_ok) continue;
    const auto target = key_map.find(event.sync_word);
    if (target == key_map.end()) {
      throw Error(ErrorCode::not_found,
                  "no uplink mapping for sync word " + event.sync_word.hex());
    }
    if (!event.value) {
      throw Error(ErrorCode::invalid_argument,
                  "rx_ok event at " + std::to_string(event.t_ns) + " ns carries no value");
    }
    ChannelUpdate update;
    update.api_key = target->second.api_key;
    update.fields[target->second.field] = static_cast<double>(*event.value);
    update.created_at = epoch_unix_s + event.t_ns / 1'000'000'000;
    updates.push_back(std::move(update));
  }
  return updates;
}

DryRunTransport::DryRunTransport(std::ostream& log, std::function<std::int64_t()> now)
    : log_(log), now_(std::move(now)) {
  if (!now_) {
    now_ = [] {
      using namespace std::chrono;
      return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
    };
  }
}

void DryRunTransport::send(const ChannelUpdate& update) {
  const auto request = format_update(update);
  const auto stamp = update.created_at ? *update.created_at : now_();
  log_ << format_iso8601(stamp) << " UPLINK " << request.request_line() << '\n';
}

Throttle::Throttle(std::chrono::milliseconds min_spacing, Clock clock, Sleeper sleep)
    : min_spacing_(min_spacing), clock_(std::move(clock)), sleep_(std::move(sleep)) {
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
  if (!sleep_) sleep_ = [](std::chrono::steady_clock::duration d) { std::this_thread::sleep_for(d); };
}

void Throttle::wait() {
  auto now = clock_();
  if (last_) {
    const auto ready = *last_ + min_spacing_;
    if (now < ready) {
      sleep_(ready - now);
      now = clock_();
    }
  }
  last_ = now;
}

HttpTransport::HttpTransport(std::string host, std::chrono::milliseconds min_spacing)
    : host_(std::move(host)), throttle_(min_spacing) {
  const char* key = std::getenv(kApiKeyEnv);
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::invalid_argument,
                std::string("live uplink needs the ") + kApiKeyEnv + " environment variable");
  }
  api_key_ = key;
}

HttpTransport::~HttpTransport() = default;

void HttpTransport::send(const ChannelUpdate& update) {
  ChannelUpdate keyed = update;
  keyed.api_key = api_key_;
  const auto request = format_update(keyed);
  throttle_.wait();
  httplib::Client client(host_);
  client.set_connection_timeout(10);
  const auto result = client.Get(request.path + "?" + request.query);
  if (!result) {
    throw Error(ErrorCode::transport,
                "uplink request failed: " + httplib::to_string(result.error()));
  }
  // The update endpoint answers "0" when it rejects a write.
  if (result->status != 200 || result->body == "0") {
    throw Error(ErrorCode::transport,
                "uplink rejected (HTTP " + std::to_string(result->status) + ")");
  }
}

std::size_t publish(const std::vector<ChannelUpdate>& updates, Transport& transport) {
  for (const auto& update : updates) transport.send(update);
  return updates.size();
}

}  // namespace loralink::uplink
