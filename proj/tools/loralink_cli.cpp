// loralink command-line front end. Talks to the library only through the C
// API in loralink.h.
//
// Exit status: 0 success, 1 I/O or runtime failure, 2 usage error,
// 3 validation/data error, 4 tolerance exceeded.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "loralink/loralink.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitTolerance = 4;

constexpr const char* kExitHelp =
    "Exit status: 0 success, 1 I/O or runtime failure, 2 usage error, "
    "3 validation/data error, 4 tolerance exceeded.";

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& message) { throw Failure{kExitUsage, message}; }

void check(ll_status status) {
  if (status == LL_OK) return;
  const int code = (status == LL_ERR_IO || status == LL_ERR_TRANSPORT || status == LL_ERR_INTERNAL)
                       ? kExitRuntime
                       : kExitValidation;
  throw Failure{code, std::string(ll_status_name(status)) + ": " + ll_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { ll_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

std::string take(char* s) {
  CString owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

struct TableDeleter {
  void operator()(ll_table* t) const { ll_table_free(t); }
};
using Table = std::unique_ptr<ll_table, TableDeleter>;

struct ReportDeleter {
  void operator()(ll_report* r) const { ll_report_free(r); }
};
using Report = std::unique_ptr<ll_report, ReportDeleter>;

std::string decimal(double v) {
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int places) {
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, places);
  return std::string(buf, res.ptr);
}

std::string khz(double hz) {
  char* out = nullptr;
  check(ll_format_khz(hz, &out));
  return take(out);
}

double parse_khz_arg(const std::string& text, const std::string& flag) {
  double hz = 0.0;
  if (ll_parse_khz(text.c_str(), &hz) != LL_OK) {
    usage_error(flag + ": '" + text + "' is not a decimal kHz value");
  }
  return hz;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

Table load_table(const std::string& path) {
  if (path.empty()) usage_error("--fixture is required");
  ll_table* raw = nullptr;
  check(ll_table_load_file(path.c_str(), LL_LOAD_VALIDATED, &raw));
  return Table(raw);
}

/// Resolved parameters of one run, echoed as `# key=value` lines.
class RunManifest {
 public:
  explicit RunManifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }

  std::string render() const {
    std::string out = "# loralink " + subcommand_ + "\n";
    for (const auto& [k, v] : entries_) out += "# " + k + "=" + v + "\n";
    return out;
  }

 private:
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitRuntime, "cannot write '" + path + "'"};
  out << text;
  if (!out) throw Failure{kExitRuntime, "write failed for '" + path + "'"};
}

struct GlobalOptions {
  std::string fixture;
  std::uint64_t seed = 1;
  std::string output;
  double tolerance = 0.05;
};

struct LinkOptions {
  double pt = 20.0;
  double gt = 5.15;
  double gr = 5.15;
  double d = 5000.0;
  double f = 433e6;
  double c = 3e8;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--pt", pt, "Transmit power, dBm")->capture_default_str();
    cmd->add_option("--gt", gt, "Transmit antenna gain, dBi")->capture_default_str();
    cmd->add_option("--gr", gr, "Receive antenna gain, dBi")->capture_default_str();
    cmd->add_option("--d", d, "Link distance, m")->capture_default_str();
    cmd->add_option("--f", f, "Carrier frequency, Hz")->capture_default_str();
    cmd->add_option("--c", c, "Propagation speed, m/s")->capture_default_str();
  }

  void record(RunManifest& m) const {
    m.set("pt_dbm", decimal(pt));
    m.set("gt_dbi", decimal(gt));
    m.set("gr_dbi", decimal(gr));
    m.set("distance_m", decimal(d));
    m.set("freq_hz", decimal(f));
    m.set("c_mps", decimal(c));
  }

  ll_link_params params() const {
    ll_link_params p;
    ll_link_params_default(&p);
    p.distance_m = d;
    p.gt_dbi = gt;
    p.gr_dbi = gr;
    p.c_mps = c;
    return p;
  }
};

// Parses "sf=7,bw_khz=10.4".
std::pair<int, double> parse_cell(const std::string& text, const std::string& flag) {
  std::optional<int> sf;
  std::optional<double> bw;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) usage_error(flag + ": expected sf=<n>,bw_khz=<kHz>");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "sf") {
      try {
        sf = std::stoi(value);
      } catch (const std::exception&) {
        usage_error(flag + ": bad sf '" + value + "'");
      }
    } else if (key == "bw_khz") {
      bw = parse_khz_arg(value, flag);
    } else {
      usage_error(flag + ": unknown key '" + key + "'");
    }
  }
  if (!sf || !bw) usage_error(flag + ": expected sf=<n>,bw_khz=<kHz>");
  return {*sf, *bw};
}

// ---- budget ----------------------------------------------------------------

struct BudgetOptions {
  std::optional<double> rssi, snr, pt, gt, gr, d, f;
  double c = 3e8;
  std::string cell;
};

void run_budget(const GlobalOptions& g, const BudgetOptions& o) {
  RunManifest m("budget");
  double rssi = 0.0;
  double snr = 0.0;
  if (!o.cell.empty()) {
    if (o.rssi || o.snr) usage_error("--cell cannot be combined with --rssi/--snr");
    const auto [sf, bw] = parse_cell(o.cell, "--cell");
    const auto table = load_table(g.fixture);
    ll_measurement rec;
    check(ll_table_cell(table.get(), sf, bw, &rec));
    rssi = rec.rssi_dbm;
    snr = rec.snr_db;
    m.set("fixture", g.fixture);
    m.set("cell", "sf=" + std::to_string(sf) + ",bw_khz=" + khz(bw));
  } else {
    if (!o.rssi) usage_error("missing required flag --rssi (or --cell)");
    if (!o.snr) usage_error("missing required flag --snr (or --cell)");
    rssi = *o.rssi;
    snr = *o.snr;
  }
  const std::pair<const char*, const std::optional<double>*> required[] = {
      {"--pt", &o.pt}, {"--gt", &o.gt}, {"--gr", &o.gr}, {"--d", &o.d}, {"--f", &o.f}};
  for (const auto& [flag, value] : required) {
    if (!value->has_value()) usage_error(std::string("missing required flag ") + flag);
  }

  m.set("rssi_dbm", decimal(rssi));
  m.set("snr_db", decimal(snr));
  m.set("pt_dbm", decimal(*o.pt));
  m.set("gt_dbi", decimal(*o.gt));
  m.set("gr_dbi", decimal(*o.gr));
  m.set("distance_m", decimal(*o.d));
  m.set("freq_hz", decimal(*o.f));
  m.set("c_mps", decimal(o.c));
  m.set("output", g.output.empty() ? "-" : g.output);

  ll_link_params params;
  ll_link_params_default(&params);
  params.distance_m = *o.d;
  params.gt_dbi = *o.gt;
  params.gr_dbi = *o.gr;
  params.c_mps = o.c;
  ll_radio_config config;
  ll_radio_config_default(&config);
  config.tx_power_dbm = *o.pt;
  config.freq_hz = *o.f;

  ll_loss_breakdown b;
  check(ll_loss_breakdown_compute(&params, &config, rssi, snr, &b));
  emit(g.output, m.render() + "esp_dbm=" + fixed(b.esp_dbm, 3) + "\n" +
                     "path_loss_db=" + fixed(b.path_loss_db, 3) + "\n" +
                     "fsl_db=" + fixed(b.fsl_db, 3) + "\n" +
                     "excess_db=" + fixed(b.excess_db, 3) + "\n");
}

// ---- reconstruct -----------------------------------------------------------

struct ReconstructOptions {
  LinkOptions link;
  std::string expected;
};

void run_reconstruct(const GlobalOptions& g, const ReconstructOptions& o) {
  if (o.expected.empty()) usage_error("missing required flag --expected");
  if (!(g.tolerance >= 0.0)) usage_error("--tolerance must be non-negative");
  const auto table = load_table(g.fixture);

  RunManifest m("reconstruct");
  m.set("fixture", g.fixture);
  m.set("expected", o.expected);
  o.link.record(m);
  m.set("tolerance_db", decimal(g.tolerance));
  m.set("output", g.output.empty() ? "-" : g.output);

  double grid[36];
  double expected[36];
  const auto params = o.link.params();
  check(ll_reconstruct_excess_loss(table.get(), &params, o.link.pt, o.link.f, grid));
  check(ll_grid_load_file(o.expected.c_str(), expected));
  ll_grid_comparison cmp;
  check(ll_grid_compare(grid, expected, g.tolerance, &cmp));

  char* csv = nullptr;
  check(ll_grid_to_csv(grid, 3, &csv));
  const std::string worst = "sf=" + std::to_string(cmp.worst_sf) + " bw_khz=" + khz(cmp.worst_bw_hz);
  std::string text = m.render() + take(csv);
  text += "# max_abs_deviation_db=" + fixed(cmp.max_abs_deviation, 4) + " at " + worst + "\n";
  text += "# cells_over_tolerance=" + std::to_string(cmp.failing_count) + "\n";
  emit(g.output, text);

  if (cmp.failing_count > 0) {
    throw Failure{kExitTolerance, std::to_string(cmp.failing_count) +
                                      " cell(s) exceed tolerance " + decimal(g.tolerance) +
                                      " dB; worst " + worst + " off by " +
                                      fixed(cmp.max_abs_deviation, 4) + " dB"};
  }
}

// ---- recommend -------------------------------------------------------------

struct RecommendOptions {
  LinkOptions link;
  double max_loss = 0.0;
  std::string min_bw_khz = "62.5";
  std::string tie_break = "snr,excess_loss,rssi";
  std::string cr_cell = "sf=8,bw_khz=250";
};

void run_recommend(const GlobalOptions& g, const RecommendOptions& o) {
  if (!(o.max_loss >= 0.0 && o.max_loss <= 100.0)) {
    usage_error("--max-loss must be within [0, 100]");
  }
  ll_constraints constraints;
  ll_constraints_default(&constraints);
  constraints.max_loss_pct = o.max_loss;
  constraints.min_bw_hz = parse_khz_arg(o.min_bw_khz, "--min-bw-khz");
  const auto metrics = split(o.tie_break, ',');
  if (metrics.empty() || metrics.size() > 4) usage_error("--tie-break takes 1 to 4 metrics");
  constraints.tie_break_len = metrics.size();
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (ll_metric_from_name(metrics[i].c_str(), &constraints.tie_break[i]) != LL_OK) {
      usage_error("--tie-break: " + std::string(ll_last_error()));
    }
  }
  const auto [cr_sf, cr_bw] = parse_cell(o.cr_cell, "--cr-cell");
  const auto table = load_table(g.fixture);

  RunManifest m("recommend");
  m.set("fixture", g.fixture);
  o.link.record(m);
  m.set("max_loss_pct", decimal(o.max_loss));
  m.set("min_bw_khz", khz(constraints.min_bw_hz));
  m.set("tie_break", o.tie_break);
  m.set("cr_cell", "sf=" + std::to_string(cr_sf) + ",bw_khz=" + khz(cr_bw));
  m.set("output", g.output.empty() ? "-" : g.output);

  const auto params = o.link.params();
  ll_candidate winner;
  std::vector<ll_candidate> ranked(36);
  std::size_t count = 0;
  check(ll_recommend_sf_bw(table.get(), &params, o.link.pt, o.link.f, &constraints, &winner,
                           ranked.data(), ranked.size(), &count));
  ranked.resize(std::min(count, ranked.size()));

  int cr_num = winner.cr_num;
  int cr_den = winner.cr_den;
  std::string cr_source = "grid record";
  if (ll_recommend_cr(table.get(), cr_sf, cr_bw, &cr_num, &cr_den) == LL_OK) {
    cr_source = "coding-rate sweep at sf=" + std::to_string(cr_sf) + " bw_khz=" + khz(cr_bw);
  }

  std::string text = m.render();
  text += "sf=" + std::to_string(winner.sf) + " bw_khz=" + khz(winner.bw_hz) +
          " cr=" + std::to_string(cr_num) + "/" + std::to_string(cr_den) + "\n";
  text += "# winner rssi_dbm=" + decimal(winner.rssi_dbm) + " snr_db=" + decimal(winner.snr_db) +
          " loss_pct=" + decimal(winner.loss_pct) + " excess_db=" + fixed(winner.excess_db, 3) +
          "\n";
  text += "# cr from " + cr_source + "\n";
  text += "rank,sf,bw_khz,cr,rssi_dbm,snr_db,loss_pct,excess_db\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& c = ranked[i];
    text += std::to_string(i + 1) + "," + std::to_string(c.sf) + "," + khz(c.bw_hz) + "," +
            std::to_string(c.cr_num) + "/" + std::to_string(c.cr_den) + "," +
            decimal(c.rssi_dbm) + "," + decimal(c.snr_db) + "," + decimal(c.loss_pct) + "," +
            fixed(c.excess_db, 3) + "\n";
  }
  emit(g.output, text);
}

// ---- simulate / uplink -----------------------------------------------------

std::vector<ll_uplink_target> parse_key_map(const std::string& text,
                                            std::vector<std::string>& keys_storage) {
  // "1A01=KEY:1,1A02=KEY:2"
  std::vector<ll_uplink_target> targets;
  const auto items = split(text, ',');
  keys_storage.reserve(items.size());
  for (const auto& item : items) {
    const auto eq = item.find('=');
    const auto colon = item.rfind(':');
    if (eq == std::string::npos || colon == std::string::npos || colon < eq) {
      usage_error("--map: expected <sync>=<api_key>:<field>, got '" + item + "'");
    }
    ll_uplink_target t{};
    if (ll_sync_word_parse(item.substr(0, eq).c_str(), &t.sync_word) != LL_OK) {
      usage_error("--map: " + std::string(ll_last_error()));
    }
    keys_storage.push_back(item.substr(eq + 1, colon - eq - 1));
    t.api_key = keys_storage.back().c_str();
    try {
      t.field = std::stoi(item.substr(colon + 1));
    } catch (const std::exception&) {
      usage_error("--map: bad field index in '" + item + "'");
    }
    targets.push_back(t);
  }
  return targets;
}

std::int64_t parse_epoch(const std::string& text) {
  std::int64_t epoch = 0;
  if (ll_parse_iso8601(text.c_str(), &epoch) != LL_OK) {
    usage_error("--epoch: " + std::string(ll_last_error()));
  }
  return epoch;
}

struct SimulateOptions {
  int nodes = 2;
  std::string sync_words;
  int sf = 8;
  std::string bw_khz = "62.5";
  int cr_num = 4;
  int cr_index = 0;
  int payload_bytes = 2;
  std::optional<double> slot_s;
  double guard_s = 0.010;
  double duration_s = 60.0;
  std::string drop;
  std::string drop_from_fixture;
  int frames_per_slot = 1;
  double handshake_s = 0.0;
  std::string uplink_log;
  std::string map;
  std::string epoch = "2024-01-01T00:00:00Z";
};

void run_simulate(const GlobalOptions& g, const SimulateOptions& o) {
  if (o.nodes < 1) usage_error("--nodes must be at least 1");
  if (!o.drop.empty() && !o.drop_from_fixture.empty()) {
    usage_error("--drop and --drop-from-fixture are mutually exclusive");
  }
  if (!o.uplink_log.empty() && o.map.empty()) usage_error("--uplink-log needs --map");

  std::vector<ll_node_spec> nodes(static_cast<std::size_t>(o.nodes));
  std::vector<std::string> words = o.sync_words.empty() ? std::vector<std::string>{}
                                                        : split(o.sync_words, ',');
  if (!words.empty() && words.size() != nodes.size()) {
    usage_error("--sync-words must list exactly --nodes entries");
  }
  const double bw_hz = parse_khz_arg(o.bw_khz, "--bw-khz");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto& n = nodes[i];
    if (words.empty()) {
      n.sync_word = static_cast<std::uint16_t>(0x1A01 + i);
    } else if (ll_sync_word_parse(words[i].c_str(), &n.sync_word) != LL_OK) {
      usage_error("--sync-words: " + std::string(ll_last_error()));
    }
    ll_radio_config_default(&n.config);
    n.config.sf = o.sf;
    n.config.bw_hz = bw_hz;
    n.config.cr_num = o.cr_num;
    ll_frame_params_default(&n.frame);
    n.frame.payload_bytes = o.payload_bytes;
    n.frame.cr_index = o.cr_index;
    n.payload_seed = g.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(n.sync_word) + 1));
    n.payload_min_cm = 2;
    n.payload_max_cm = 400;
  }

  std::vector<double> drops(nodes.size(), 0.0);
  if (!o.drop.empty()) {
    const auto parts = split(o.drop, ',');
    if (parts.size() != nodes.size()) usage_error("--drop must list one probability per node");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      try {
        std::size_t used = 0;
        drops[i] = std::stod(parts[i], &used);
        if (used != parts[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        usage_error("--drop: bad probability '" + parts[i] + "'");
      }
    }
  } else if (!o.drop_from_fixture.empty()) {
    const auto table = load_table(o.drop_from_fixture);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      check(ll_drop_from_table(table.get(), &nodes[i], &drops[i]));
    }
  }

  double slot_s = 0.0;
  if (o.slot_s) slot_s = *o.slot_s;
  else check(ll_default_slot_s(nodes.data(), nodes.size(), &slot_s));

  ll_sim_options options;
  ll_sim_options_default(&options);
  options.frames_per_slot = o.frames_per_slot;
  options.handshake_s = o.handshake_s;

  RunManifest m("simulate");
  std::string word_list;
  std::string drop_list;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    char hex[8];
    std::snprintf(hex, sizeof hex, "%04X", nodes[i].sync_word);
    word_list += (i ? "," : "") + std::string(hex);
    drop_list += (i ? "," : "") + decimal(drops[i]);
  }
  ll_radio_config shown = nodes.front().config;
  char* config_text = nullptr;
  check(ll_config_to_text(&shown, &config_text));
  m.set("nodes", std::to_string(nodes.size()));
  m.set("sync_words", word_list);
  m.set("config", take(config_text));
  m.set("payload_bytes", std::to_string(o.payload_bytes));
  m.set("cr_index", o.cr_index == 0 ? "derived" : std::to_string(o.cr_index));
  m.set("slot_s", decimal(slot_s));
  m.set("guard_s", decimal(o.guard_s));
  m.set("duration_s", decimal(o.duration_s));
  m.set("frames_per_slot", std::to_string(o.frames_per_slot));
  m.set("handshake_s", decimal(o.handshake_s));
  m.set("drop", drop_list);
  if (!o.drop_from_fixture.empty()) m.set("drop_fixture", o.drop_from_fixture);
  m.set("seed", std::to_string(g.seed));
  m.set("output", g.output.empty() ? "-" : g.output);
  if (!o.uplink_log.empty()) {
    m.set("uplink_log", o.uplink_log);
    m.set("map", o.map);
    m.set("epoch", o.epoch);
  }

  ll_report* raw = nullptr;
  check(ll_simulate(nodes.data(), nodes.size(), slot_s, o.guard_s, drops.data(), o.duration_s,
                    g.seed, &options, &raw));
  Report report(raw);
  char* serialized = nullptr;
  check(ll_report_serialize(report.get(), &serialized));
  emit(g.output, m.render() + take(serialized));

  if (!o.uplink_log.empty()) {
    std::vector<std::string> keys;
    const auto targets = parse_key_map(o.map, keys);
    char* log = nullptr;
    std::size_t sent = 0;
    check(ll_uplink_dry_run(report.get(), targets.data(), targets.size(), parse_epoch(o.epoch),
                            &log, &sent));
    emit(o.uplink_log, m.render() + take(log));
  }
}

struct UplinkOptions {
  std::string report;
  std::string map;
  std::string epoch = "2024-01-01T00:00:00Z";
  bool live = false;
  std::string host = "http://api.thingspeak.com";
  std::optional<double> min_spacing_s;
};

void run_uplink(const GlobalOptions& g, const UplinkOptions& o) {
  if (o.report.empty()) usage_error("missing required flag --report");
  if (o.map.empty()) usage_error("missing required flag --map");
  std::vector<std::string> keys;
  const auto targets = parse_key_map(o.map, keys);
  const auto epoch = parse_epoch(o.epoch);

  std::ifstream in(o.report, std::ios::binary);
  if (!in) throw Failure{kExitRuntime, "cannot open '" + o.report + "'"};
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto text = buffer.str();
  ll_report* raw = nullptr;
  check(ll_report_parse(text.data(), text.size(), &raw));
  Report report(raw);

  RunManifest m("uplink");
  m.set("report", o.report);
  m.set("map", o.map);
  m.set("epoch", o.epoch);
  m.set("transport", o.live ? "http" : "dry-run");
  if (o.live) m.set("host", o.host);
  m.set("output", g.output.empty() ? "-" : g.output);

  if (o.live) {
    const double spacing = o.min_spacing_s.value_or(15.0);
    m.set("min_spacing_s", decimal(spacing));
    std::size_t sent = 0;
    check(ll_uplink_live(report.get(), targets.data(), targets.size(), epoch, o.host.c_str(),
                         spacing, &sent));
    emit(g.output, m.render() + "sent=" + std::to_string(sent) + "\n");
    return;
  }
  char* log = nullptr;
  std::size_t sent = 0;
  check(ll_uplink_dry_run(report.get(), targets.data(), targets.size(), epoch, &log, &sent));
  emit(g.output, m.render() + take(log));
}

// ---- sweep -----------------------------------------------------------------

struct SweepOptions {
  LinkOptions link;
  std::string metric;
};

void run_sweep(const GlobalOptions& g, const SweepOptions& o) {
  const auto table = load_table(g.fixture);
  RunManifest m("sweep");
  m.set("fixture", g.fixture);
  m.set("metric", o.metric);
  const bool derived = o.metric == "esp" || o.metric == "path_loss" || o.metric == "excess";
  if (derived) o.link.record(m);
  m.set("output", g.output.empty() ? "-" : g.output);

  const auto params = o.link.params();
  ll_radio_config config;
  ll_radio_config_default(&config);
  config.tx_power_dbm = o.link.pt;
  config.freq_hz = o.link.f;

  std::string text = m.render() + "sf,bw_khz," + o.metric + "\n";
  for (std::size_t row = 0; row < ll_grid_bw_count(); ++row) {
    for (std::size_t col = 0; col < ll_grid_sf_count(); ++col) {
      const int sf = ll_grid_sf(col);
      const double bw = ll_grid_bw_hz(row);
      ll_measurement rec;
      check(ll_table_cell(table.get(), sf, bw, &rec));
      std::string value;
      if (o.metric == "rssi") value = decimal(rec.rssi_dbm);
      else if (o.metric == "snr") value = decimal(rec.snr_db);
      else if (o.metric == "loss") value = decimal(rec.loss_pct);
      else {
        ll_loss_breakdown b;
        check(ll_loss_breakdown_compute(&params, &config, rec.rssi_dbm, rec.snr_db, &b));
        const double v = o.metric == "esp" ? b.esp_dbm
                         : o.metric == "path_loss" ? b.path_loss_db
                                                   : b.excess_db;
        value = fixed(v, 3);
      }
      text += std::to_string(sf) + "," + khz(bw) + "," + value + "\n";
    }
  }
  emit(g.output, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LoRa link-quality toolkit: link budgets, table reconstruction, "
               "configuration recommendation, TDMA simulation and uplink bridging."};
  app.footer(kExitHelp);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--fixture", global.fixture, "Measurement CSV fixture");
  app.add_option("--seed", global.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--output", global.output, "Output path (default stdout)");
  app.add_option("--tolerance", global.tolerance, "Reconstruction tolerance, dB")
      ->capture_default_str();

  BudgetOptions budget;
  auto* budget_cmd = app.add_subcommand("budget", "ESP, path loss, free-space and excess loss");
  budget_cmd->fallthrough();
  budget_cmd->add_option("--rssi", budget.rssi, "Mean RSSI, dBm");
  budget_cmd->add_option("--snr", budget.snr, "Mean SNR, dB");
  budget_cmd->add_option("--pt", budget.pt, "Transmit power, dBm");
  budget_cmd->add_option("--gt", budget.gt, "Transmit antenna gain, dBi");
  budget_cmd->add_option("--gr", budget.gr, "Receive antenna gain, dBi");
  budget_cmd->add_option("--d", budget.d, "Distance, m");
  budget_cmd->add_option("--f", budget.f, "Frequency, Hz");
  budget_cmd->add_option("--c", budget.c, "Propagation speed, m/s")->capture_default_str();
  budget_cmd->add_option("--cell", budget.cell, "Take RSSI/SNR from fixture cell sf=<n>,bw_khz=<kHz>");

  ReconstructOptions reconstruct;
  auto* reconstruct_cmd =
      app.add_subcommand("reconstruct", "Excess-loss grid vs an expected grid");
  reconstruct_cmd->fallthrough();
  reconstruct.link.add_to(reconstruct_cmd);
  reconstruct_cmd->add_option("--expected", reconstruct.expected, "Expected grid CSV");

  RecommendOptions recommend;
  auto* recommend_cmd = app.add_subcommand("recommend", "Pick SF/BW and coding rate");
  recommend_cmd->fallthrough();
  recommend.link.add_to(recommend_cmd);
  recommend_cmd->add_option("--max-loss", recommend.max_loss, "Packet-loss ceiling, %")
      ->capture_default_str();
  recommend_cmd->add_option("--min-bw-khz", recommend.min_bw_khz, "Minimum bandwidth, kHz")
      ->capture_default_str();
  recommend_cmd->add_option("--tie-break", recommend.tie_break,
                            "Ranking order from snr, excess_loss, rssi, loss")
      ->capture_default_str();
  recommend_cmd->add_option("--cr-cell", recommend.cr_cell, "Coding-rate sweep cell")
      ->capture_default_str();

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Deterministic TDMA simulation");
  simulate_cmd->fallthrough();
  simulate_cmd->add_option("--nodes", simulate.nodes, "Node count")->capture_default_str();
  simulate_cmd->add_option("--sync-words", simulate.sync_words, "Comma-separated 4-hex-digit words");
  simulate_cmd->add_option("--sf", simulate.sf)->capture_default_str();
  simulate_cmd->add_option("--bw-khz", simulate.bw_khz)->capture_default_str();
  simulate_cmd->add_option("--cr", simulate.cr_num, "Coding-rate numerator k of k/8")
      ->capture_default_str();
  simulate_cmd->add_option("--cr-index", simulate.cr_index,
                           "Datasheet CR index 1..4 for airtime (0 = derive from 4/8)")
      ->capture_default_str();
  simulate_cmd->add_option("--payload-bytes", simulate.payload_bytes)->capture_default_str();
  simulate_cmd->add_option("--slot-s", simulate.slot_s, "Slot length (default 2x airtime, ms-rounded)");
  simulate_cmd->add_option("--guard-s", simulate.guard_s)->capture_default_str();
  simulate_cmd->add_option("--duration-s", simulate.duration_s)->capture_default_str();
  simulate_cmd->add_option("--drop", simulate.drop, "Per-node drop probabilities");
  simulate_cmd->add_option("--drop-from-fixture", simulate.drop_from_fixture,
                           "Take drop probabilities from a measurement fixture");
  simulate_cmd->add_option("--frames-per-slot", simulate.frames_per_slot)->capture_default_str();
  simulate_cmd->add_option("--handshake-s", simulate.handshake_s)->capture_default_str();
  simulate_cmd->add_option("--uplink-log", simulate.uplink_log, "Write a dry-run uplink log");
  simulate_cmd->add_option("--map", simulate.map, "<sync>=<api_key>:<field>,...");
  simulate_cmd->add_option("--epoch", simulate.epoch, "Virtual time zero, UTC")
      ->capture_default_str();

  UplinkOptions uplink;
  auto* uplink_cmd = app.add_subcommand("uplink", "Bridge a simulation report to channel updates");
  uplink_cmd->fallthrough();
  uplink_cmd->add_option("--report", uplink.report, "Report file from `simulate`");
  uplink_cmd->add_option("--map", uplink.map, "<sync>=<api_key>:<field>,...");
  uplink_cmd->add_option("--epoch", uplink.epoch, "Virtual time zero, UTC")->capture_default_str();
  uplink_cmd->add_flag("--live", uplink.live, "Send over HTTP (key from UPLINK_API_KEY)");
  uplink_cmd->add_option("--host", uplink.host)->capture_default_str();
  uplink_cmd->add_option("--min-spacing-s", uplink.min_spacing_s,
                         "Minimum spacing between live sends (default 15)");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Metric vs (SF, BW) as plot-ready CSV");
  sweep_cmd->fallthrough();
  sweep.link.add_to(sweep_cmd);
  sweep_cmd->add_option("--metric", sweep.metric, "Metric to tabulate")
      ->required()
      ->check(CLI::IsMember({"rssi", "snr", "loss", "esp", "path_loss", "excess"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*budget_cmd) run_budget(global, budget);
    else if (*reconstruct_cmd) run_reconstruct(global, reconstruct);
    else if (*recommend_cmd) run_recommend(global, recommend);
    else if (*simulate_cmd) run_simulate(global, simulate);
    else if (*uplink_cmd) run_uplink(global, uplink);
    else if (*sweep_cmd) run_sweep(global, sweep);
  } catch (const Failure& f) {
    std::cerr << "loralink: " << f.message << "\n";
    return f.exit_code;
  }
  return 0;
}
