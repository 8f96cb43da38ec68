#include <sstream>

#include "ntnlab/coverage.hpp"
#include "ntnlab/error.hpp"
#include "test_support.hpp"

using namespace ntn;
using namespace ntn::test;

namespace {

double ground_speed_km_s(double altitude_km) {
  const double a = kR + altitude_km;
  return std::sqrt(kMu / a) * kR / a;
}

BeamConfig beam(double radius_km) {
  BeamConfig b;
  b.radius_km = radius_km;
  return b;
}

TrackingAreaConfig tracking(int cells_per_ta, int list_size = 1) {
  TrackingAreaConfig ta;
  ta.cells_per_ta = cells_per_ta;
  ta.registered_list_size = list_size;
  return ta;
}

}  // namespace

TEST_CASE("beam-centre distance") {
  const EarthModel still = still_earth();
  const OrbitConfig orbit = polar(600.0);
  const GroundPoint ue{0.0, 0.0};
  CHECK(beam_center_distance_km(still, orbit, ue, 0.0) < 1e-9);
  CHECK(beam_center_distance_km(EarthModel{}, orbit, ue, 0.0) < 1e-9);

  double lo = 1e9;
  for (double t = -300.0; t <= 300.0; t += 0.5) {
    lo = std::min(lo, beam_center_distance_km(still, orbit, ue, t));
  }
  CHECK(lo < 1e-9);

  CHECK_NEAR(ground_speed_km_s(600.0), 6.9109, 1e-4);
  const double rate = beam_center_distance_km(still, orbit, ue, 201.0) -
                      beam_center_distance_km(still, orbit, ue, 200.0);
  CHECK_NEAR(rate, 6.9109, 1e-3);
  const double before = beam_center_distance_km(still, orbit, ue, -201.0) -
                        beam_center_distance_km(still, orbit, ue, -200.0);
  CHECK_NEAR(before, 6.9109, 1e-3);
}

TEST_CASE("beam dwell") {
  const EarthModel still = still_earth();
  const OrbitConfig orbit = polar(600.0);
  const GroundPoint ue{0.0, 0.0};
  const double half = half_pass_s(600.0, 10.0);

  const double dwell = beam_dwell_time_s(still, orbit, ue, beam(50.0), -half, half);
  CHECK_NEAR(dwell, 14.470, 2e-3);
  CHECK_NEAR(dwell, 15.0, 1.0);
  CHECK(dwell * ground_speed_km_s(600.0) == doctest::Approx(100.0).epsilon(0.02));

  for (double r : {10.0, 100.0, 200.0}) {
    const double d = beam_dwell_time_s(still, orbit, ue, beam(r), -half, half);
    CHECK(d * ground_speed_km_s(600.0) == doctest::Approx(2.0 * r).epsilon(0.02));
  }

  SUBCASE("tangency") {
    const GroundPoint edge = offset_from_track(still, orbit, 0.0, 50.0, OffsetDirection::cross_track);
    CHECK(beam_dwell_time_s(still, orbit, edge, beam(50.0), -half, half) <= 0.5);
    const GroundPoint outside =
        offset_from_track(still, orbit, 0.0, 60.0, OffsetDirection::cross_track);
    CHECK(beam_dwell_time_s(still, orbit, outside, beam(50.0), -half, half) == 0.0);
  }

  SUBCASE("monotone in radius") {
    const GroundPoint off = offset_from_track(still, orbit, 0.0, 20.0, OffsetDirection::cross_track);
    double prev = 0.0;
    for (double r : {10.0, 25.0, 50.0, 100.0, 200.0, 400.0}) {
      const double d = beam_dwell_time_s(EarthModel{}, orbit, off, beam(r), -half, half);
      CHECK(d >= prev);
      prev = d;
    }
  }

  SUBCASE("earth-fixed beams have no dwell definition") {
    BeamConfig fixed = beam(50.0);
    fixed.mode = BeamMode::earth_fixed;
    CHECK_THROWS_AS(beam_dwell_time_s(still, orbit, ue, fixed, -half, half), ConfigError);
  }
}

TEST_CASE("beam configuration checks") {
  CHECK(beam(50.0).warnings().empty());
  CHECK(beam(10.0).warnings().empty());
  CHECK(beam(3000.0).warnings().empty());
  CHECK(beam(5.0).warnings().size() == 1);
  CHECK(beam(4000.0).warnings().size() == 1);
  CHECK_NOTHROW(beam(5.0).validate());
  CHECK_THROWS_AS(beam(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(beam(-3.0).validate(), ConfigError);

  CHECK_THROWS_AS(tracking(0).validate(), ConfigError);
  CHECK_THROWS_AS(tracking(1, 0).validate(), ConfigError);

  ConstellationConfig c;
  c.num_satellites = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.num_satellites = 4;
  CHECK(c.satellite(1).phase_deg == doctest::Approx(c.orbit.phase_deg + 90.0));
}

TEST_CASE("serving timeline") {
  const EarthModel still = still_earth();
  const GroundPoint ue{0.0, 0.0};

  SUBCASE("single satellite equals its passes") {
    ConstellationConfig c;
    c.orbit = polar(600.0);
    const ServingTimeline tl = serving_timeline(still, c, ue, 10.0, -12000.0, 12000.0);
    const std::vector<Pass> passes = visibility_passes(still, c.orbit, ue, 10.0, -12000.0, 12000.0);
    REQUIRE(tl.intervals.size() == passes.size());
    REQUIRE(passes.size() >= 3);
    for (std::size_t i = 0; i < passes.size(); ++i) {
      CHECK(tl.intervals[i].sat_idx == 0);
      CHECK_NEAR(tl.intervals[i].t_start_s, passes[i].t_rise_s, 1e-3);
      CHECK_NEAR(tl.intervals[i].t_end_s, passes[i].t_set_s, 1e-3);
    }
    CHECK(tl.handovers() == 0);
    CHECK(tl.gaps.size() == passes.size() + 1);
  }

  SUBCASE("dense constellation: no gaps, cadence period/N") {
    ConstellationConfig c;
    c.orbit = polar(600.0);
    c.num_satellites = 40;
    const double period = orbital_velocity_and_period(still, c.orbit).period_s;
    const ServingTimeline tl = serving_timeline(still, c, ue, 10.0, -1800.0, 1800.0);
    CHECK(tl.gaps.empty());
    REQUIRE(tl.intervals.size() > 10);
    CHECK(tl.intervals.front().t_start_s == -1800.0);
    CHECK(tl.intervals.back().t_end_s == 1800.0);
    for (std::size_t i = 1; i + 1 < tl.intervals.size(); ++i) {
      CHECK_NEAR(tl.intervals[i].t_end_s - tl.intervals[i].t_start_s, period / 40.0, 0.01);
      CHECK(tl.intervals[i].sat_idx != tl.intervals[i - 1].sat_idx);
    }
    CHECK(tl.handovers() == tl.intervals.size() - 1);
  }

  SUBCASE("non-overlapping and above the mask throughout") {
    ConstellationConfig c;
    c.orbit = polar(600.0);
    c.num_satellites = 12;
    const EarthModel earth;
    const GroundPoint where{35.0, 20.0};
    const ServingTimeline tl = serving_timeline(earth, c, where, 10.0, -6000.0, 6000.0);
    REQUIRE(!tl.intervals.empty());
    for (std::size_t i = 0; i < tl.intervals.size(); ++i) {
      const ServingInterval& iv = tl.intervals[i];
      CHECK(iv.t_start_s < iv.t_end_s);
      if (i > 0) CHECK(iv.t_start_s >= tl.intervals[i - 1].t_end_s - 1e-9);
      const OrbitConfig o = c.satellite(iv.sat_idx);
      // Interior 1 s samples; the bisected boundaries sit within tolerance of 10 deg.
      for (double t = std::ceil(iv.t_start_s); t <= iv.t_end_s; t += 1.0) {
        CHECK(look_angles(earth, o, where, t).elevation_deg >= 10.0 - 1e-3);
      }
    }
    for (const Interval& g : tl.gaps) {
      for (const ServingInterval& iv : tl.intervals) {
        CHECK((g.t_end_s <= iv.t_start_s + 1e-9 || g.t_start_s >= iv.t_end_s - 1e-9));
      }
    }
  }

  SUBCASE("serving satellite is the highest one") {
    ConstellationConfig c;
    c.orbit = polar(600.0);
    c.num_satellites = 40;
    for (double t = -500.0; t <= 500.0; t += 37.0) {
      const int s = serving_satellite(still, c, ue, 10.0, t);
      REQUIRE(s >= 0);
      const double best = look_angles(still, c.satellite(s), ue, t).elevation_deg;
      for (int k = 0; k < 40; ++k) {
        CHECK(look_angles(still, c.satellite(k), ue, t).elevation_deg <= best);
      }
    }
  }

  SUBCASE("timeline CSV writes gaps as -1") {
    ServingTimeline tl;
    tl.intervals.push_back({0, 10.0, 20.0});
    tl.gaps.push_back({0.0, 10.0});
    std::ostringstream out;
    write_timeline_csv(out, tl);
    CHECK(out.str() == "sat_idx,t_start_s,t_end_s\n-1,0,10\n0,10,20\n");
  }
}

TEST_CASE("tracking-area updates") {
  const EarthModel still = still_earth();
  const OrbitConfig orbit = polar(600.0);
  const GroundPoint ue{0.0, 0.0};

  TrackingAreaConfig geo = tracking(8);
  geo.binding = TaBinding::geo_bound;
  CHECK(tau_events(EarthModel{}, orbit, beam(50.0), geo, ue, -3600.0, 3600.0).events == 0);

  const double rate8 = tau_event_rate(still, orbit, beam(50.0), tracking(8), ue, 0.0, 36000.0);
  CHECK_NEAR(rate8, 31.10, 0.5);
  CHECK_NEAR(3600.0 * ground_speed_km_s(600.0) / (8.0 * 100.0), 31.10, 0.01);

  SUBCASE("inverse scaling with cells per TA") {
    const double base = tau_event_rate(still, orbit, beam(50.0), tracking(1), ue, 0.0, 36000.0);
    for (int k : {2, 4, 8}) {
      const double r = tau_event_rate(still, orbit, beam(50.0), tracking(k), ue, 0.0, 36000.0);
      CHECK(r * k == doctest::Approx(base).epsilon(0.05));
    }
  }

  SUBCASE("very large TAs stop the updates") {
    const TauSummary s = tau_events(still, orbit, beam(50.0), tracking(1000000), ue, 0.0, 36000.0);
    CHECK(s.events <= 1);
    CHECK(s.events_per_hour() <= 0.1);
  }

  SUBCASE("registered list size never increases the count") {
    std::uint64_t prev = ~std::uint64_t{0};
    for (int list : {1, 2, 3, 5}) {
      const auto n = tau_events(still, orbit, beam(50.0), tracking(8, list), ue, 0.0, 36000.0).events;
      CHECK(n <= prev);
      prev = n;
    }
  }

  CHECK(TauSummary{}.events_per_hour() == 0.0);
  CHECK_THROWS_AS(tau_events(still, orbit, beam(50.0), tracking(8), ue, 10.0, 10.0), ConfigError);
}

TEST_CASE("beam distance CSV") {
  std::ostringstream out;
  write_beam_distance_csv(out, still_earth(), polar(600.0), GroundPoint{}, -1.0, 1.0, 1.0);
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "t_s,distance_km");
  CHECK(lines[2] == "0,0");
}
