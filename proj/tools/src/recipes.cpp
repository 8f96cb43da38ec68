#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>

#include "commands.hpp"
#include "ntnlab/coverage.hpp"
#include "ntnlab/error.hpp"
#include "ntnlab/link_metrics.hpp"
#include "ntnlab/stack_sim.hpp"
#include "ntnlab_cli/cli.hpp"

namespace ntn::cli {
namespace {

constexpr std::array<double, 3> kAltitudes_km{600.0, 1000.0, 1400.0};
constexpr std::array<double, 3> kOffsets_km{50.0, 100.0, 200.0};

// Sample window centred on the pass peak, so the peak itself is a sample.
struct Window {
  double t0_s;
  double t1_s;
};

Window around_peak(const Pass& p, double dt_s) {
  const double half = std::min(p.t_peak_s - p.t_rise_s, p.t_set_s - p.t_peak_s);
  const double n = std::max(1.0, std::floor(half / dt_s));
  return {p.t_peak_s - n * dt_s, p.t_peak_s + n * dt_s};
}

std::string altitude_traces(const Scenario& sc, const fs::path& out, const char* prefix) {
  std::string s = strprintf("%-12s %-12s %-12s %-14s %-14s %s\n", "altitude_km", "pass_s",
                            "max_elev", "min_delay_ms", "edge_delay_ms", "max_doppler_hz");
  for (double h : kAltitudes_km) {
    OrbitConfig orbit = sc.orbit;
    orbit.altitude_km = h;
    const Pass p = central_pass(sc.earth, orbit, sc.ues.front(), sc.run.min_elev_deg);
    const Window w = around_peak(p, sc.run.dt_s);
    const Trace trace =
        sample_trace(sc.earth, orbit, sc.ues.front(), sc.carrier, w.t0_s, w.t1_s, sc.run.dt_s);
    const std::string name = strprintf("%s_%.0fkm.csv", prefix, h);
    write_checked_csv(out / name, trace_csv_schema(),
                      [&](std::ostream& f) { write_trace_csv(f, trace); });

    double min_delay = trace.samples.front().one_way_delay_ms;
    double max_doppler = 0.0;
    for (const LinkSample& x : trace.samples) {
      min_delay = std::min(min_delay, x.one_way_delay_ms);
      max_doppler = std::max(max_doppler, std::abs(x.doppler_hz));
    }
    s += strprintf("%-12.0f %-12.3f %-12.3f %-14.4f %-14.4f %.1f\n", h, p.duration_s(),
                   p.max_elev_deg, min_delay, trace.samples.front().one_way_delay_ms,
                   max_doppler);
  }
  return s;
}

std::string fig2a(const Scenario& sc, const fs::path& out) {
  return "elevation trajectories, reference UE\n" + altitude_traces(sc, out, "elevation");
}

std::string fig2b(const Scenario& sc, const fs::path& out) {
  const GroundPoint& ue = sc.ues.front();
  const Pass p = central_pass(sc.earth, sc.orbit, ue, sc.run.min_elev_deg);
  const Window w = around_peak(p, sc.run.dt_s);
  write_checked_csv(out / "beam_distance.csv", beam_distance_csv_schema(), [&](std::ostream& f) {
    write_beam_distance_csv(f, sc.earth, sc.orbit, ue, w.t0_s, w.t1_s, sc.run.dt_s);
  });
  BeamConfig beam = sc.beam;
  beam.mode = BeamMode::moving;
  const double dwell = beam_dwell_time_s(sc.earth, sc.orbit, ue, beam, p.t_rise_s, p.t_set_s);
  const OrbitalMotion m = orbital_velocity_and_period(sc.earth, sc.orbit);
  const double a = semi_major_axis_km(sc.earth, sc.orbit);
  std::string s = "beam-centre distance, reference UE, moving beam\n";
  s += strprintf("altitude %g km, pass %.3f s, ground-track speed %.4f km/s\n",
                 sc.orbit.altitude_km, p.duration_s(), m.speed_km_s * sc.earth.radius_km / a);
  s += strprintf("dwell with radius %g km: %.3f s\n", beam.radius_km, dwell);
  return s;
}

std::string fig3a(const Scenario& sc, const fs::path& out) {
  return "service-link delay trajectories, reference UE\n" + altitude_traces(sc, out, "delay");
}

std::vector<OffsetPoint> offset_points(const Scenario& sc, const Pass& p, OffsetDirection dir) {
  std::vector<OffsetPoint> pts;
  for (double d : kOffsets_km) {
    pts.push_back({d, offset_from_track(sc.earth, sc.orbit, p.t_peak_s, d, dir)});
  }
  return pts;
}

std::string max_by_offset(const std::vector<OffsetSample>& samples, const char* unit) {
  std::map<double, double> worst;
  for (const OffsetSample& x : samples) {
    double& m = worst[x.offset_km];
    m = std::max(m, std::abs(x.value));
  }
  std::string s;
  for (const auto& [d, v] : worst) s += strprintf("offset %-6.0f km  max |value| %.3f %s\n", d, v, unit);
  return s;
}

std::string fig3b(const Scenario& sc, const fs::path& out) {
  const GroundPoint& ref = sc.ues.front();
  const Pass p = central_pass(sc.earth, sc.orbit, ref, sc.run.min_elev_deg);
  const Window w = around_peak(p, sc.run.dt_s);
  const auto series =
      differential_delay_series(sc.earth, sc.orbit, ref,
                                offset_points(sc, p, OffsetDirection::cross_track), w.t0_s,
                                w.t1_s, sc.run.dt_s);
  write_checked_csv(out / "differential_delay.csv", differential_delay_csv_schema(),
                    [&](std::ostream& f) { write_offset_series_csv(f, differential_delay_csv_schema(), series); });
  return "differential delay to cross-track offsets, reference UE pass\n" +
         max_by_offset(series, "us");
}

std::string fig4a(const Scenario& sc, const fs::path& out) {
  return "Doppler trajectories, reference UE\n" + altitude_traces(sc, out, "doppler");
}

std::string fig4b(const Scenario& sc, const fs::path& out) {
  const GroundPoint& ref = sc.ues.front();
  const Pass p = central_pass(sc.earth, sc.orbit, ref, sc.run.min_elev_deg);
  const Window w = around_peak(p, sc.run.dt_s);
  const auto series = residual_doppler_series(
      sc.earth, sc.orbit, ref, offset_points(sc, p, OffsetDirection::along_track), sc.carrier,
      w.t0_s, w.t1_s, sc.run.dt_s);
  write_checked_csv(out / "residual_doppler.csv", residual_doppler_csv_schema(),
                    [&](std::ostream& f) { write_offset_series_csv(f, residual_doppler_csv_schema(), series); });
  return "residual Doppler after pre-compensation at the reference UE, along-track offsets\n" +
         max_by_offset(series, "Hz");
}

std::string fig5(const Scenario& sc, const fs::path& out) {
  StackScenario on = sc.stack();
  on.harq.enabled = true;
  StackScenario off = on;
  off.harq.enabled = false;
  std::string s = "HARQ on\n" + simulate_into(on, sc.run.bin_width_us, out / "harq_on");
  s += "\nHARQ off\n" + simulate_into(off, sc.run.bin_width_us, out / "harq_off");
  return s;
}

using Recipe = std::function<std::string(const Scenario&, const fs::path&)>;

const std::map<std::string, Recipe, std::less<>>& recipes() {
  static const std::map<std::string, Recipe, std::less<>> table{
      {"fig2a", fig2a}, {"fig2b", fig2b}, {"fig3a", fig3a}, {"fig3b", fig3b},
      {"fig4a", fig4a}, {"fig4b", fig4b}, {"fig5", fig5}};
  return table;
}

}  // namespace

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : recipes()) v.push_back(name);
    return v;
  }();
  return names;
}

std::string run_recipe(std::string_view name, const Scenario& scenario, const fs::path& out_dir) {
  const auto it = recipes().find(name);
  if (it == recipes().end()) throw ConfigError("unknown recipe '" + std::string(name) + "'");
  fs::create_directories(out_dir);
  return it->second(scenario, out_dir);
}

}  // namespace ntn::cli
