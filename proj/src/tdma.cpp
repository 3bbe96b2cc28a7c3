#include "loralink/tdma.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "loralink/error.hpp"
#include "loralink/link_budget.hpp"

namespace loralink::tdma {

std::string SyncWord::hex() const {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out(4, '0');
  for (int i = 0; i < 4; ++i) out[3 - i] = kDigits[(value_ >> (4 * i)) & 0xF];
  return out;
}

SyncWord SyncWord::parse(std::string_view text) {
  if (text.size() == 6 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
  }
  unsigned value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (text.size() != 4 || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(0, "sync word must be exactly 4 hex digits, got '" +
                            std::string(text) + "'");
  }
  return SyncWord(static_cast<std::uint16_t>(value));
}

Nanoseconds to_ns(double seconds) {
  if (!std::isfinite(seconds) || seconds < 0.0 || seconds > 9.2e9) {
    throw Error(ErrorCode::invalid_argument,
                "time value out of range: " + format_decimal(seconds) + " s");
  }
  return static_cast<Nanoseconds>(std::llround(seconds * 1e9));
}

Nanoseconds airtime_ns(const NodeSpec& node) {
  return static_cast<Nanoseconds>(std::ceil(phy::time_on_air(node.config, node.frame) * 1e9));
}

SlotSchedule build_schedule(std::span<const NodeSpec> nodes, double slot_duration_s,
                            double guard_s) {
  if (nodes.empty()) throw Error(ErrorCode::invalid_argument, "schedule needs at least one node");
  std::set<SyncWord> seen;
  for (const auto& node : nodes) {
    if (!seen.insert(node.sync_word).second) {
      throw Error(ErrorCode::conflict, "duplicate sync word " + node.sync_word.hex());
    }
  }
  SlotSchedule schedule;
  schedule.slot_ns = to_ns(slot_duration_s);
  schedule.guard_ns = to_ns(guard_s);
  if (schedule.slot_ns <= 0) {
    throw Error(ErrorCode::invalid_argument, "slot duration must be positive");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto air = airtime_ns(nodes[i]);
    if (air > schedule.slot_ns) {
      throw Error(ErrorCode::infeasible,
                  "slot of " + format_decimal(slot_duration_s) + " s is shorter than node " +
                      nodes[i].sync_word.hex() + "'s airtime of " +
                      format_decimal(static_cast<double>(air) / 1e9) + " s");
    }
    schedule.order.push_back(i);
  }
  return schedule;
}

double default_slot_duration_s(std::span<const NodeSpec> nodes) {
  Nanoseconds longest = 0;
  for (const auto& node : nodes) longest = std::max(longest, airtime_ns(node));
  const Nanoseconds ms = (2 * longest + 999'999) / 1'000'000;
  return static_cast<double>(std::max<Nanoseconds>(ms, 1)) / 1000.0;
}

std::string_view event_name(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::slot_open: return "slot_open";
    case EventKind::tx_start: return "tx_start";
    case EventKind::tx_end: return "tx_end";
    case EventKind::rx_ok: return "rx_ok";
    case EventKind::rx_drop: return "rx_drop";
    case EventKind::slot_close: return "slot_close";
  }
  return "?";
}

namespace {

void check_inputs(std::span<const NodeSpec> nodes, const SlotSchedule& schedule,
                  std::span<const double> drop_probability, double duration_s,
                  const SimOptions& options) {
  if (drop_probability.size() != nodes.size()) {
    throw Error(ErrorCode::invalid_argument, "need one drop probability per node");
  }
  for (double p : drop_probability) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "drop probability " + format_decimal(p) + " outside [0, 1]");
    }
  }
  if (!(duration_s > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "duration must be positive");
  }
  std::vector<std::size_t> sorted = schedule.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted.size() != nodes.size() || sorted[i] != i) {
      throw Error(ErrorCode::invalid_argument,
                  "schedule order is not a permutation of the nodes");
    }
  }
  if (options.frames_per_slot < 1) {
    throw Error(ErrorCode::invalid_argument, "frames per slot must be at least 1");
  }
  const auto handshake = to_ns(options.handshake_s);
  for (const auto& node : nodes) {
    if (node.payload.min_cm > node.payload.max_cm) {
      throw Error(ErrorCode::invalid_argument, "payload range is empty");
    }
    if (handshake + options.frames_per_slot * airtime_ns(node) > schedule.slot_ns) {
      throw Error(ErrorCode::infeasible,
                  "handshake plus " + std::to_string(options.frames_per_slot) +
                      " frame(s) do not fit node " + node.sync_word.hex() + "'s slot");
    }
  }
}

double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

SimReport run_simulation(std::span<const NodeSpec> nodes, const SlotSchedule& schedule,
                         std::span<const double> drop_probability, double duration_s,
                         std::uint64_t seed, const SimOptions& options) {
  check_inputs(nodes, schedule, drop_probability, duration_s, options);

  const Nanoseconds end = to_ns(duration_s);
  const Nanoseconds handshake = to_ns(options.handshake_s);
  const Nanoseconds stride = schedule.slot_ns + schedule.guard_ns;

  std::mt19937_64 drops(seed);
  std::vector<std::mt19937_64> readers;
  std::vector<Nanoseconds> airtimes;
  SimReport report;
  for (const auto& node : nodes) {
    readers.emplace_back(node.payload.seed);
    airtimes.push_back(airtime_ns(node));
    report.nodes.push_back({node.sync_word, 0, 0, 0, std::nullopt});
  }

  std::vector<std::uint64_t> next_seq(nodes.size(), 0);
  for (std::uint64_t k = 0;; ++k) {
    const Nanoseconds open = static_cast<Nanoseconds>(k) * stride;
    if (open >= end) break;
    const std::size_t idx = schedule.order[k % schedule.order.size()];
    const auto& node = nodes[idx];
    auto& stats = report.nodes[idx];
    const auto span = static_cast<std::uint64_t>(node.payload.max_cm - node.payload.min_cm) + 1;

    report.timeline.push_back({open, EventKind::slot_open, node.sync_word, {}, {}});
    Nanoseconds t = open + handshake;
    for (int f = 0; f < options.frames_per_slot; ++f) {
      const std::uint64_t seq = next_seq[idx]++;
      const std::int64_t value =
          node.payload.min_cm + static_cast<std::int64_t>(readers[idx]() % span);
      const Nanoseconds done = t + airtimes[idx];
      report.timeline.push_back({t, EventKind::tx_start, node.sync_word, seq, value});
      report.timeline.push_back({done, EventKind::tx_end, node.sync_word, seq, value});
      ++stats.packets_sent;
      const bool dropped = unit_draw(drops) < drop_probability[idx];
      if (dropped) ++stats.packets_lost;
      else ++stats.packets_received;
      report.timeline.push_back(
          {done, dropped ? EventKind::rx_drop : EventKind::rx_ok, node.sync_word, seq, value});
      t = done;
    }
    report.timeline.push_back(
        {open + schedule.slot_ns, EventKind::slot_close, node.sync_word, {}, {}});
  }

  for (auto& stats : report.nodes) {
    if (stats.packets_sent > 0) {
      stats.measured_loss_pct = budget::packet_loss_pct(stats.packets_lost, stats.packets_sent);
    }
  }
  return report;
}

double drop_model_from_table(const dataset::MeasurementTable& table, const NodeSpec& node) {
  const auto& rec = table.cell(node.config.sf, node.config.bw_hz);
  return *rec.loss_pct / 100.0;
}

void write_report(const SimReport& report, std::ostream& out) {
  for (const auto& e : report.timeline) {
    out << e.t_ns << ' ' << event_name(e.kind) << ' ' << e.sync_word.hex();
    if (e.seq) out << " seq=" << *e.seq;
    if (e.value) out << " value=" << *e.value;
    out << '\n';
  }
  for (const auto& n : report.nodes) {
    out << "node " << n.sync_word.hex() << " sent=" << n.packets_sent
        << " received=" << n.packets_received << " lost=" << n.packets_lost << " loss_pct="
        << (n.measured_loss_pct ? format_decimal(*n.measured_loss_pct) : "n/a") << '\n';
  }
}

std::string serialize_report(const SimReport& report) {
  std::ostringstream out;
  write_report(report, out);
  return out.str();
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

template <typename T>
T parse_integer(std::string_view text, std::size_t line) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(line, "bad integer '" + std::string(text) + "'");
  }
  return value;
}

std::string_view expect_key(std::string_view word, std::string_view key, std::size_t line) {
  if (word.substr(0, key.size()) != key || word.size() <= key.size() ||
      word[key.size()] != '=') {
    throw ParseError(line, "expected '" + std::string(key) + "=', got '" + std::string(word) + "'");
  }
  return word.substr(key.size() + 1);
}

EventKind parse_event_kind(std::string_view name, std::size_t line) {
  for (auto kind : {EventKind::slot_open, EventKind::tx_start, EventKind::tx_end,
                    EventKind::rx_ok, EventKind::rx_drop, EventKind::slot_close}) {
    if (event_name(kind) == name) return kind;
  }
  throw ParseError(line, "unknown event '" + std::string(name) + "'");
}

}  // namespace

SimReport read_report(std::istream& in) {
  SimReport report;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto words = split_spaces(line);
    try {
      if (words.front() == "node") {
        if (words.size() != 6) throw ParseError(line_no, "summary line needs 6 fields");
        NodeStats n;
        n.sync_word = SyncWord::parse(words[1]);
        n.packets_sent = parse_integer<std::uint64_t>(expect_key(words[2], "sent", line_no), line_no);
        n.packets_received =
            parse_integer<std::uint64_t>(expect_key(words[3], "received", line_no), line_no);
        n.packets_lost = parse_integer<std::uint64_t>(expect_key(words[4], "lost", line_no), line_no);
        const auto pct = expect_key(words[5], "loss_pct", line_no);
        if (pct != "n/a") n.measured_loss_pct = parse_decimal(pct);
        report.nodes.push_back(n);
        continue;
      }
      if (words.size() < 3 || words.size() > 5) {
        throw ParseError(line_no, "event line needs 3 to 5 fields");
      }
      Event e;
      e.t_ns = parse_integer<Nanoseconds>(words[0], line_no);
      e.kind = parse_event_kind(words[1], line_no);
      e.sync_word = SyncWord::parse(words[2]);
      for (std::size_t i = 3; i < words.size(); ++i) {
        if (words[i].starts_with("seq=")) {
          e.seq = parse_integer<std::uint64_t>(words[i].substr(4), line_no);
        } else {
          e.value = parse_integer<std::int64_t>(expect_key(words[i], "value", line_no), line_no);
        }
      }
      report.timeline.push_back(e);
    } catch (const ParseError& err) {
      if (err.line() != 0) throw;
      throw ParseError(line_no, err.what());
    } catch (const Error& err) {
      throw ParseError(line_no, err.what());
    }
  }
  return report;
}

SimReport parse_report(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_report(in);
}

}  // namespace loralink::tdma
