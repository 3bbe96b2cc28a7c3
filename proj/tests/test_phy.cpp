#include <doctest.h>

#include <cmath>

#include "loralink/error.hpp"
#include "loralink/phy.hpp"
#include "oracles.hpp"

using namespace loralink;
using namespace loralink::phy;

namespace {

RadioConfig cfg(int sf, double bw, int cr = 4) {
  RadioConfig c;
  c.sf = sf;
  c.bw_hz = bw;
  c.cr = CodingRate(cr);
  return c;
}

FrameParams frame(int payload, int cr_index = 4) {
  FrameParams f;
  f.payload_bytes = payload;
  f.cr_index = cr_index;
  return f;
}

}  // namespace

TEST_CASE("symbol duration") {
  CHECK(symbol_duration(cfg(7, 125000)) == doctest::Approx(1.024e-3).epsilon(1e-12));
  CHECK(symbol_duration(cfg(12, 500000)) == doctest::Approx(8.192e-3).epsilon(1e-12));
  CHECK(std::abs(symbol_duration(cfg(12, 10400)) - 0.393846) < 1e-6);
  for (int sf = 7; sf < 12; ++sf) {
    CHECK(symbol_duration(cfg(sf + 1, 62500)) == 2 * symbol_duration(cfg(sf, 62500)));
    CHECK(symbol_duration(cfg(sf, 250000)) == symbol_duration(cfg(sf, 125000)) / 2);
  }
}

TEST_CASE("airtime examples") {
  FrameParams f = frame(2, 1);
  CHECK(std::abs(time_on_air(cfg(7, 125000), f) - 30.976e-3) < 1e-12);

  // Empty payload with CRC on still needs one coded block.
  f = frame(0, 1);
  CHECK(std::abs(time_on_air(cfg(7, 125000), f) - 25.856e-3) < 1e-12);
  f.crc_on = false;
  CHECK(std::abs(time_on_air(cfg(7, 125000), f) - 20.736e-3) < 1e-12);

  const double slow = time_on_air(cfg(12, 10400), frame(2));
  CHECK(slow > 12.25 * symbol_duration(cfg(12, 10400)));
  CHECK(slow == oracle::airtime(12, 10400, 4, 2, 8, true, true, -1));
}

TEST_CASE("coding-rate index resolution") {
  FrameParams f;
  CHECK(datasheet_cr_index(cfg(7, 125000, 4), f) == 4);
  CHECK_THROWS_AS(datasheet_cr_index(cfg(7, 125000, 5), f), Error);
  f.cr_index = 2;
  CHECK(datasheet_cr_index(cfg(7, 125000, 6), f) == 2);
  f.cr_index = 5;
  CHECK_THROWS_AS(time_on_air(cfg(7, 125000), f), Error);
  f.cr_index = 0;
  CHECK_THROWS_AS(time_on_air(cfg(7, 125000), f), Error);
}

TEST_CASE("low data rate optimisation") {
  FrameParams f;
  CHECK_FALSE(low_data_rate_enabled(cfg(10, 125000), f));  // 8.192 ms
  CHECK(low_data_rate_enabled(cfg(11, 125000), f));         // 16.384 ms
  CHECK(low_data_rate_enabled(cfg(7, 10400), f) == false);  // 12.3 ms
  f.low_data_rate_optimize = false;
  CHECK_FALSE(low_data_rate_enabled(cfg(12, 10400), f));
  f.low_data_rate_optimize = true;
  CHECK(low_data_rate_enabled(cfg(7, 500000), f));
}

TEST_CASE("airtime rejects bad frames") {
  FrameParams f = frame(-1);
  CHECK_THROWS_AS(time_on_air(cfg(7, 125000), f), Error);
  f = frame(2);
  f.preamble_symbols = -1;
  CHECK_THROWS_AS(time_on_air(cfg(7, 125000), f), Error);
  RadioConfig tiny = cfg(7, 125000);
  tiny.sf = 2;
  f = frame(2);
  f.low_data_rate_optimize = true;
  CHECK_THROWS_AS(time_on_air(tiny, f), Error);
}

TEST_CASE("property: airtime equals the oracle on the grid") {
  for (int sf : kGridSpreadingFactors)
    for (double bw : kGridBandwidthsHz)
      for (int payload : {0, 1, 2, 16, 255})
        for (int cr_index = 1; cr_index <= 4; ++cr_index) {
          const auto f = frame(payload, cr_index);
          REQUIRE(time_on_air(cfg(sf, bw), f) ==
                  oracle::airtime(sf, bw, cr_index, payload, 8, true, true, -1));
        }
}

TEST_CASE("property: airtime monotonicity") {
  for (double bw : kGridBandwidthsHz) {
    for (int sf : kGridSpreadingFactors) {
      double prev = 0;
      for (int payload = 0; payload <= 255; ++payload) {
        const double t = time_on_air(cfg(sf, bw), frame(payload));
        REQUIRE(t >= prev);
        prev = t;
      }
      prev = 0;
      for (int pre = 6; pre <= 64; ++pre) {
        auto f = frame(16);
        f.preamble_symbols = pre;
        const double t = time_on_air(cfg(sf, bw), f);
        REQUIRE(t >= prev);
        prev = t;
      }
    }
    for (int payload : {0, 2, 16, 255}) {
      double prev = 0;
      for (int sf : kGridSpreadingFactors) {
        const double t = time_on_air(cfg(sf, bw), frame(payload));
        REQUIRE(t >= prev);
        prev = t;
      }
    }
  }
  for (int sf : kGridSpreadingFactors) {
    double prev = INFINITY;
    for (double bw : kGridBandwidthsHz) {
      const double t = time_on_air(cfg(sf, bw), frame(16));
      REQUIRE(t <= prev);
      prev = t;
    }
  }
}

TEST_CASE("nominal bit rate") {
  CHECK(std::abs(nominal_bit_rate(cfg(7, 125000)) - 3417.97) < 0.01);
  CHECK(std::abs(nominal_bit_rate(cfg(12, 10400)) - 15.23) < 0.01);
  CHECK(std::abs(nominal_bit_rate(cfg(8, 62500)) - 976.56) < 0.01);
  for (int sf : kGridSpreadingFactors)
    for (double bw : kGridBandwidthsHz)
      for (int cr = 4; cr < 7; ++cr) {
        REQUIRE(nominal_bit_rate(cfg(sf, bw, cr + 1)) >= nominal_bit_rate(cfg(sf, bw, cr)));
      }
}

TEST_CASE("monopole dimensions") {
  const auto m = monopole_dimensions(433e6);
  CHECK(std::abs(m.element_len_m - 0.165) < 0.001);
  CHECK(std::abs(m.radial_len_m - 0.184) < 0.001);
  CHECK(m.radial_angle_deg == 45.0);
  CHECK(m.gain_dbi == 5.15);
  const auto h = monopole_dimensions(866e6);
  CHECK(std::abs(h.element_len_m - 0.0825) < 0.0005);
  CHECK(h.element_len_m == doctest::Approx(m.element_len_m / 2).epsilon(1e-14));
  for (double f = 100e6; f < 3e9; f *= 1.37) {
    const auto d = monopole_dimensions(f);
    REQUIRE(d.radial_len_m > d.element_len_m);
    REQUIRE(d.element_len_m * f == doctest::Approx(m.element_len_m * 433e6).epsilon(1e-12));
  }
  CHECK_THROWS_AS(monopole_dimensions(0), Error);
  CHECK_THROWS_AS(monopole_dimensions(-433e6), Error);
}
