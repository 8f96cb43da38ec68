#include <random>
#include <sstream>

#include "ntnlab/error.hpp"
#include "ntnlab/link_metrics.hpp"
#include "test_support.hpp"

using namespace ntn;
using namespace ntn::test;

namespace {

double max_abs_doppler(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                       double t0, double t1, double dt) {
  double best = 0.0;
  for (const LinkSample& s : sample_trace(earth, orbit, gp, CarrierConfig{}, t0, t1, dt).samples) {
    if (s.elevation_deg >= 0.0) best = std::max(best, std::abs(s.doppler_hz));
  }
  return best;
}

double max_abs_residual(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& ref,
                        const GroundPoint& ue, double t0, double t1, double dt) {
  const auto series =
      residual_doppler_series(earth, orbit, ref, {{0.0, ue}}, CarrierConfig{}, t0, t1, dt);
  double best = 0.0;
  for (const OffsetSample& s : series) best = std::max(best, std::abs(s.value));
  return best;
}

}  // namespace

TEST_CASE("one-way delay") {
  CHECK_NEAR(one_way_delay_ms(35786.0), 119.369, 1e-3);
  CHECK_NEAR(one_way_delay_ms(35786.0), 119.37, 0.1);
  CHECK_NEAR(one_way_delay_ms(600.0), 2.0, 0.01);
  CHECK(one_way_delay_ms(0.0) == 0.0);

  const EarthModel earth;
  const double d10 = one_way_delay_ms(slant_range_at_elevation_km(earth, 600.0, 10.0));
  CHECK_NEAR(d10, 6.4432, 1e-4);
  CHECK_NEAR(d10, 6.5, 0.1);
  CHECK_NEAR(slant_range_at_elevation_km(earth, 600.0, 90.0), 600.0, 1e-9);
}

TEST_CASE("bent-pipe round trip") {
  const EarthModel earth;
  CHECK_NEAR(bent_pipe_rtt_ms(earth, 90.0, 90.0, 600.0), 8.0055, 1e-4);
  CHECK_NEAR(bent_pipe_rtt_ms(earth, 90.0, 90.0, 600.0), 8.0, 0.05);
  CHECK_NEAR(bent_pipe_rtt_ms(earth, 5.0, 10.0, 600.0), 28.4176, 1e-4);
  CHECK_NEAR(bent_pipe_rtt_ms(earth, 5.0, 10.0, 600.0), 28.0, 1.0);
  CHECK(bent_pipe_rtt_ms(earth, 5.0, 10.0, 600.0) == bent_pipe_rtt_ms(earth, 10.0, 5.0, 600.0));
  CHECK_THROWS_AS(bent_pipe_rtt_ms(earth, 0.0, 10.0, 600.0), ConfigError);
  CHECK_THROWS_AS(bent_pipe_rtt_ms(earth, 10.0, -1.0, 600.0), ConfigError);
  CHECK_THROWS_AS(bent_pipe_rtt_ms(earth, 10.0, 90.5, 600.0), ConfigError);
}

TEST_CASE("differential delay") {
  const EarthModel still = still_earth();
  const OrbitConfig orbit = polar(600.0);
  const SatelliteState sat = propagate(still, orbit, 0.0);
  const Vec3 p0 = ground_point_position(still, GroundPoint{0.0, 0.0}, 0.0);
  CHECK(differential_delay_ms(sat, p0, p0) == 0.0);

  // 50 km ground arc from the sub-satellite point.
  const GroundPoint far = destination_point(still, GroundPoint{0.0, 0.0}, 90.0, 50.0);
  const Vec3 p1 = ground_point_position(still, far, 0.0);
  CHECK_NEAR(differential_delay_ms(sat, p0, p1) * 1000.0, 7.5893, 1e-4);

  SUBCASE("max over the pass grows with cross-track offset; pinned at 10 ms sampling") {
    const double half = half_pass_s(600.0, 10.0);
    const std::vector<OffsetPoint> pts{
        {50.0, offset_from_track(still, orbit, 0.0, 50.0, OffsetDirection::cross_track)},
        {100.0, offset_from_track(still, orbit, 0.0, 100.0, OffsetDirection::cross_track)},
        {200.0, offset_from_track(still, orbit, 0.0, 200.0, OffsetDirection::cross_track)}};
    const auto series =
        differential_delay_series(still, orbit, GroundPoint{0.0, 0.0}, pts, -half, half, 0.01);
    double worst[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < series.size(); ++i) {
      worst[i % 3] = std::max(worst[i % 3], std::abs(series[i].value));
    }
    CHECK_NEAR(worst[0], 7.5893, 1e-3);
    CHECK_NEAR(worst[1], 30.1866, 1e-3);
    CHECK_NEAR(worst[2], 118.1613, 1e-3);
    CHECK(worst[0] < worst[1]);
    CHECK(worst[1] < worst[2]);
  }

  SUBCASE("antisymmetry and triangle bound") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lat(-60.0, 60.0), lon(-179.0, 179.0), t(-3000.0, 3000.0);
    const EarthModel earth;
    for (int i = 0; i < 500; ++i) {
      const SatelliteState s = propagate(earth, orbit, t(rng));
      const Vec3 p = ground_point_position(earth, GroundPoint{lat(rng), lon(rng)}, s.t_s);
      const Vec3 q = ground_point_position(earth, GroundPoint{lat(rng), lon(rng)}, s.t_s);
      CHECK(differential_delay_ms(s, p, q) == -differential_delay_ms(s, q, p));
      const double bound = great_circle_distance_km(earth, p, q) / kC * 1000.0;
      CHECK(std::abs(differential_delay_ms(s, p, q)) <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("Doppler shift") {
  const GroundPoint origin{0.0, 0.0};
  const CarrierConfig carrier;

  SUBCASE("geostationary satellite has no Doppler") {
    const EarthModel earth;
    OrbitConfig geo;
    geo.altitude_km = geostationary_altitude_km(earth);
    geo.inclination_deg = 0.0;
    for (double t : {0.0, 3600.0, 40000.0}) {
      for (const GroundPoint& gp : {origin, GroundPoint{30.0, 20.0}}) {
        CHECK(std::abs(doppler_shift_hz(earth, geo, gp, carrier, t)) <= 1.0);
        CHECK(std::abs(doppler_rate_hz_s(earth, geo, gp, carrier, t)) <= 1e-3);
      }
    }
  }

  SUBCASE("sign change at closest approach") {
    const EarthModel earth;
    CHECK(doppler_shift_hz(earth, polar(600.0), origin, carrier, -10.0) > 0.0);
    CHECK(doppler_shift_hz(earth, polar(600.0), origin, carrier, 10.0) < 0.0);
    CHECK(std::abs(doppler_shift_hz(still_earth(), polar(600.0), origin, carrier, 0.0)) < 1e-6);
  }

  SUBCASE("maximum over a pass") {
    const double half0 = half_pass_s(600.0, 0.0);
    const double still_max = max_abs_doppler(still_earth(), polar(600.0), origin, -half0, half0, 0.1);
    CHECK_NEAR(still_max, 46104.5, 100.0);
    const double closed = carrier.f_c_hz / kC * kR * std::sqrt(kMu / (kR + 600.0)) / (kR + 600.0);
    CHECK_NEAR(closed, 46104.5, 0.1);
    CHECK(still_max <= closed + 1e-6);
    const double rot_max = max_abs_doppler(EarthModel{}, polar(600.0), origin, -600.0, 600.0, 0.1);
    CHECK(rot_max >= 44000.0);
    CHECK(rot_max <= 50000.0);
  }

  SUBCASE("Doppler rate") {
    const EarthModel still = still_earth();
    CHECK_NEAR(doppler_rate_hz_s(still, polar(600.0), origin, carrier, 0.0), -581.05, 0.05);
    CHECK_NEAR(doppler_rate_hz_s(still, polar(600.0), origin, carrier, 0.0), -580.0, 5.0);
    const EarthModel earth;
    const std::vector<Pass> passes = visibility_passes(earth, polar(600.0), origin, 10.0, -600.0, 600.0);
    REQUIRE(passes.size() == 1);
    for (double t = passes[0].t_rise_s; t <= passes[0].t_set_s; t += 5.0) {
      const double r1 = doppler_rate_hz_s(earth, polar(600.0), origin, carrier, t, 1e-3);
      const double r01 = doppler_rate_hz_s(earth, polar(600.0), origin, carrier, t, 1e-4);
      CHECK(r1 < 0.0);
      CHECK(std::abs(r1 - r01) <= 0.5);
    }
  }

  SUBCASE("gradient check against finite-difference range rate") {
    const EarthModel earth;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(-2000.0, 2000.0), lat(-70.0, 70.0), lon(-30.0, 30.0);
    const double h = 1e-3;
    for (int i = 0; i < 500; ++i) {
      const double tt = t(rng);
      const GroundPoint gp{lat(rng), lon(rng)};
      auto range = [&](double x) {
        return norm(propagate(earth, polar(600.0), x).pos_km - ground_point_position(earth, gp, x));
      };
      const double fd = -carrier.f_c_hz / kC * (range(tt + h) - range(tt - h)) / (2.0 * h);
      CHECK(std::abs(doppler_shift_hz(earth, polar(600.0), gp, carrier, tt) - fd) <= 0.1);
    }
  }
}

TEST_CASE("residual Doppler after reference pre-compensation") {
  const EarthModel still = still_earth();
  const OrbitConfig orbit = polar(600.0);
  const GroundPoint ref{0.0, 0.0};
  const double half = half_pass_s(600.0, 10.0);

  const SatelliteState sat = propagate(still, orbit, -100.0);
  const GroundState r = ground_point_state(still, ref, -100.0);
  CHECK(precompensated_residual_hz(sat, r, r, CarrierConfig{}) == 0.0);

  // Oracle: 2 F(d/2), F the Doppler at central angle theta.
  const double a = kR + 600.0;
  const double v = std::sqrt(kMu / a);
  auto F = [&](double theta) {
    const double rho = std::sqrt(kR * kR + a * a - 2.0 * kR * a * std::cos(theta));
    return 2e9 / kC * kR * v * std::sin(theta) / rho;
  };

  double along[3];
  double across[3];
  const double offsets[3] = {50.0, 100.0, 200.0};
  for (int i = 0; i < 3; ++i) {
    along[i] = max_abs_residual(
        still, orbit, ref, offset_from_track(still, orbit, 0.0, offsets[i], OffsetDirection::along_track),
        -half, half, 0.05);
    across[i] = max_abs_residual(
        still, orbit, ref, offset_from_track(still, orbit, 0.0, offsets[i], OffsetDirection::cross_track),
        -half, half, 0.05);
    CHECK_NEAR(along[i], 2.0 * F(offsets[i] / 2.0 / kR), 2.0);
  }
  CHECK_NEAR(along[1], 8375.9, 2.0);
  CHECK(along[1] >= 6500.0);
  CHECK(along[1] <= 9500.0);
  CHECK(along[0] < along[1]);
  CHECK(along[1] < along[2]);
  CHECK(across[0] <= across[1]);
  CHECK(across[1] <= across[2]);
}

TEST_CASE("sample_trace") {
  const EarthModel earth;
  const OrbitConfig orbit = polar(600.0);
  const GroundPoint gp{0.0, 0.0};
  const CarrierConfig carrier;

  CHECK(sample_trace(earth, orbit, gp, carrier, -10.0, 10.0, 20.0).samples.size() == 2);

  const Trace coarse = sample_trace(earth, orbit, gp, carrier, -300.0, 300.0, 2.0);
  const Trace fine = sample_trace(earth, orbit, gp, carrier, -300.0, 300.0, 1.0);
  REQUIRE(fine.samples.size() == 2 * coarse.samples.size() - 1);
  for (std::size_t k = 0; k < coarse.samples.size(); ++k) {
    const LinkSample& c = coarse.samples[k];
    const LinkSample& f = fine.samples[2 * k];
    CHECK(c.t_s == f.t_s);
    CHECK(c.slant_range_km == f.slant_range_km);
    CHECK(c.doppler_hz == f.doppler_hz);
    CHECK(c.doppler_rate_hz_s == f.doppler_rate_hz_s);
  }
  for (std::size_t k = 0; k < fine.samples.size(); ++k) {
    const LinkSample& s = fine.samples[k];
    CHECK(s.t_s == -300.0 + static_cast<double>(k) * 1.0);
    CHECK(s.one_way_delay_ms == s.slant_range_km / CarrierConfig::c_km_s * 1000.0);
    CHECK(std::isfinite(s.doppler_hz));
  }

  CHECK_THROWS_AS(sample_trace(earth, orbit, gp, carrier, 0.0, 10.0, 0.0), ConfigError);
  CHECK_THROWS_AS(sample_trace(earth, orbit, gp, carrier, 0.0, 10.0, -1.0), ConfigError);
  CHECK_THROWS_AS(sample_trace(earth, orbit, gp, carrier, 10.0, 10.0, 1.0), ConfigError);
}

TEST_CASE("delay trajectories over full passes") {
  const EarthModel still = still_earth();
  const double expected_min[3] = {2.0, 3.34, 4.67};
  const double altitudes[3] = {600.0, 1000.0, 1400.0};
  double previous = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double half = half_pass_s(altitudes[i], 10.0);
    const Trace tr =
        sample_trace(still, polar(altitudes[i]), GroundPoint{}, CarrierConfig{}, -half, half, half / 500.0);
    double lo = 1e9;
    for (const LinkSample& s : tr.samples) lo = std::min(lo, s.one_way_delay_ms);
    CHECK_NEAR(lo, expected_min[i], 0.01);
    CHECK(lo > previous);
    previous = lo;
    if (i == 0) {
      CHECK_NEAR(tr.samples.front().one_way_delay_ms, 6.4432, 1e-3);
      CHECK_NEAR(tr.samples.back().one_way_delay_ms, 6.4432, 1e-3);
    }
  }
}

TEST_CASE("trace CSV follows the column contract") {
  const Trace tr = sample_trace(EarthModel{}, polar(600.0), GroundPoint{}, CarrierConfig{}, 0.0, 3.0, 1.0);
  std::ostringstream out;
  write_trace_csv(out, tr);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t_s,elev_deg,range_km,delay_ms,doppler_hz,doppler_rate_hz_s");
  std::string row;
  std::getline(in, row);
  CHECK(row.rfind("0,90,600,2.00138,", 0) == 0);
  CHECK(out.str().find('\r') == std::string::npos);
  CHECK(out.str().back() == '\n');
}
