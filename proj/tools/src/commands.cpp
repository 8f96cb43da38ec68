#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "ntnlab/access.hpp"
#include "ntnlab/coverage.hpp"
#include "ntnlab/error.hpp"
#include "ntnlab/link_metrics.hpp"
#include "ntnlab/stack_sim.hpp"

namespace ntn::cli {

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

Pass central_pass(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                  double min_elev_deg) {
  const double half = orbital_velocity_and_period(earth, orbit).period_s / 2.0;
  const auto passes = visibility_passes(earth, orbit, gp, min_elev_deg, -half, half);
  if (passes.empty()) throw NoServingLink("no pass above the elevation mask near t = 0");
  return *std::min_element(passes.begin(), passes.end(), [](const Pass& a, const Pass& b) {
    return std::abs(a.t_peak_s) < std::abs(b.t_peak_s);
  });
}

std::string cmd_trace(const Scenario& sc, std::size_t ue, const fs::path& out) {
  if (ue >= sc.ues.size()) {
    throw ConfigError(strprintf("--ue %zu: scenario defines %zu UE(s)", ue, sc.ues.size()));
  }
  const Trace trace = sample_trace(sc.earth, sc.orbit, sc.ues[ue], sc.carrier, sc.run.t0_s,
                                   sc.run.t1_s, sc.run.dt_s);
  write_checked_csv(out / "trace.csv", trace_csv_schema(),
                    [&](std::ostream& f) { write_trace_csv(f, trace); });

  std::string s = strprintf("trace: ue %zu, %zu samples, t = [%g, %g] s, dt = %g s\n", ue,
                            trace.samples.size(), sc.run.t0_s, sc.run.t1_s, sc.run.dt_s);
  const auto visible = std::count_if(trace.samples.begin(), trace.samples.end(),
                                     [](const LinkSample& x) { return x.elevation_deg >= 0.0; });
  if (visible == 0) return s + "satellite below the horizon for the whole window\n";

  const LinkSample* best = nullptr;
  double max_doppler = 0.0;
  for (const LinkSample& x : trace.samples) {
    if (x.elevation_deg < 0.0) continue;
    if (!best || x.one_way_delay_ms < best->one_way_delay_ms) best = &x;
    max_doppler = std::max(max_doppler, std::abs(x.doppler_hz));
  }
  s += strprintf("min one-way delay  %.4f ms at t = %g s (elevation %.2f deg)\n",
                 best->one_way_delay_ms, best->t_s, best->elevation_deg);
  s += strprintf("max |doppler|      %.1f Hz (elevation >= 0)\n", max_doppler);
  return s;
}

std::string cmd_pass(const Scenario& sc) {
  const OrbitalMotion m = orbital_velocity_and_period(sc.earth, sc.orbit);
  std::string s = strprintf("orbit %g km, inclination %g deg: speed %.4f km/s, period %.2f s\n",
                            sc.orbit.altitude_km, sc.orbit.inclination_deg, m.speed_km_s,
                            m.period_s);
  s += strprintf("elevation mask %g deg, window [%g, %g] s\n", sc.run.min_elev_deg, sc.run.t0_s,
                 sc.run.t1_s);
  s += "ue    rise_s      set_s       peak_s      max_elev_deg  duration_s\n";
  for (std::size_t i = 0; i < sc.ues.size(); ++i) {
    const auto passes = visibility_passes(sc.earth, sc.orbit, sc.ues[i], sc.run.min_elev_deg,
                                          sc.run.t0_s, sc.run.t1_s);
    if (passes.empty()) s += strprintf("%-4zu  (no pass)\n", i);
    for (const Pass& p : passes) {
      s += strprintf("%-4zu  %-10.3f  %-10.3f  %-10.3f  %-12.3f  %.3f\n", i, p.t_rise_s, p.t_set_s,
                     p.t_peak_s, p.max_elev_deg, p.duration_s());
    }
  }
  return s;
}

std::string cmd_access(const Scenario& sc) {
  const GroundPoint& ue0 = sc.ues.front();
  const auto passes = visibility_passes(sc.earth, sc.orbit, ue0, sc.run.min_elev_deg, sc.run.t0_s,
                                        sc.run.t1_s);
  if (passes.empty()) throw NoServingLink("reference UE has no pass in the run window");
  const Pass pass = *std::max_element(passes.begin(), passes.end(), [](const Pass& a, const Pass& b) {
    return a.max_elev_deg < b.max_elev_deg;
  });
  const double t = pass.t_peak_s;
  const SatelliteState sat = propagate(sc.earth, sc.orbit, t);
  const GroundPoint ref = sc.beam.mode == BeamMode::earth_fixed ? sc.beam.center : ue0;

  std::string s = strprintf("evaluated at t = %.3f s (peak of reference UE pass, %.2f deg)\n", t,
                            pass.max_elev_deg);
  s += strprintf("reference point (%.4f, %.4f) deg, feeder offset %.4f ms\n", ref.lat_deg,
                 ref.lon_deg, sc.access.feeder_offset_ms);
  s += "ue    elev_deg  full_ta_ms  total_ta_ms  diff_ta_us  precomp_hz    ul_adjust_hz  net_dl_doppler_hz\n";
  for (std::size_t i = 0; i < sc.ues.size(); ++i) {
    const GroundPoint& ue = sc.ues[i];
    const LookAngles look = elevation_and_range(sat, ground_point_position(sc.earth, ue, t));
    if (look.elevation_deg < 0.0) {
      s += strprintf("%-4zu  %-8.2f  (below horizon)\n", i, look.elevation_deg);
      continue;
    }
    const TimingAdvanceResult full = gnss_full_ta(sc.earth, sc.orbit, ue, t, sc.access.feeder_offset_ms);
    const TimingAdvanceResult diff = reference_point_ta(sc.earth, ue, ref, sat);
    const FrequencyAdjustment adj =
        frequency_adjustments(sc.earth, sat, ref, ue, sc.carrier, sc.uplink_carrier);
    s += strprintf("%-4zu  %-8.2f  %-10.4f  %-11.4f  %-10.3f  %-12.1f  %-12.1f  %.1f\n", i,
                   look.elevation_deg, full.full_ta_ms, full.total_ta_ms(),
                   diff.differential_ta_ms.value_or(0.0) * 1000.0, adj.forward_precomp_hz,
                   adj.ue_uplink_adjust_hz,
                   net_downlink_doppler_hz(sc.earth, sat, ue, adj, sc.carrier));
  }

  const double spread = beam_max_differential_rtt_ms(sc.earth, sc.orbit, ref, sc.beam.radius_km,
                                                     pass.t_rise_s, pass.t_set_s);
  const PrachVerdict v = prach_feasible(spread, sc.access.prach);
  s += strprintf("beam radius %g km: max differential RTT %.4f ms over the pass\n",
                 sc.beam.radius_km, spread);
  s += strprintf("PRACH CP %.3f ms: %s, margin %.4f ms\n", sc.access.prach.cp_ms,
                 v.feasible ? "feasible" : "infeasible", v.margin_ms);
  s += strprintf("max terrestrial cell radius for this CP: %.3f km\n",
                 max_cell_radius_km(sc.access.prach));
  return s;
}

std::string cmd_coverage(const Scenario& sc, const fs::path& out) {
  const GroundPoint& ue0 = sc.ues.front();
  const ServingTimeline tl = serving_timeline(sc.earth, sc.constellation(), ue0,
                                              sc.run.min_elev_deg, sc.run.t0_s, sc.run.t1_s);
  write_checked_csv(out / "timeline.csv", timeline_csv_schema(),
                    [&](std::ostream& f) { write_timeline_csv(f, tl); });

  std::string s;
  for (const std::string& w : sc.beam.warnings()) s += "warning: " + w + "\n";
  double served = 0.0;
  for (const ServingInterval& iv : tl.intervals) served += iv.t_end_s - iv.t_start_s;
  double gap_total = 0.0;
  for (const Interval& g : tl.gaps) gap_total += g.duration_s();
  s += strprintf("constellation: %d satellite(s), mask %g deg, window [%g, %g] s\n",
                 sc.num_satellites, sc.run.min_elev_deg, sc.run.t0_s, sc.run.t1_s);
  s += strprintf("serving intervals %zu, handovers %zu, served %.3f s, gaps %zu (%.3f s)\n",
                 tl.intervals.size(), tl.handovers(), served, tl.gaps.size(), gap_total);

  if (sc.beam.mode == BeamMode::moving) {
    const double dwell = beam_dwell_time_s(sc.earth, sc.orbit, ue0, sc.beam, sc.run.t0_s,
                                           sc.run.t1_s);
    s += strprintf("beam dwell (radius %g km): %.3f s\n", sc.beam.radius_km, dwell);
  }
  const TauSummary tau = tau_events(sc.earth, sc.orbit, sc.beam, sc.tracking, ue0, sc.run.t0_s,
                                    sc.run.t1_s);
  s += strprintf("tracking areas: %s, %d cells per TA, list size %d\n",
                 sc.tracking.binding == TaBinding::beam_bound ? "beam_bound" : "geo_bound",
                 sc.tracking.cells_per_ta, sc.tracking.registered_list_size);
  s += strprintf("TAU events %llu over %.1f s = %.2f per hour\n",
                 static_cast<unsigned long long>(tau.events), tau.window_s, tau.events_per_hour());
  return s;
}

namespace {

std::string layer_line(const char* name, const LayerCounts& c) {
  return strprintf("%-5s generated %llu delivered %llu discarded %llu in_flight %llu\n", name,
                   static_cast<unsigned long long>(c.generated),
                   static_cast<unsigned long long>(c.delivered),
                   static_cast<unsigned long long>(c.discarded),
                   static_cast<unsigned long long>(c.in_flight));
}

std::string quantile_line(const char* name, const DelayStats& st) {
  if (!st.max) return strprintf("%-5s no samples\n", name);
  return strprintf("%-5s delay p50 %.3f ms  p95 %.3f ms  p99 %.3f ms  max %.3f ms\n", name,
                   static_cast<double>(*st.p50) / 1000.0, static_cast<double>(*st.p95) / 1000.0,
                   static_cast<double>(*st.p99) / 1000.0, static_cast<double>(*st.max) / 1000.0);
}

}  // namespace

std::string simulate_into(const StackScenario& stack, std::int64_t bin_width_us,
                          const fs::path& dir) {
  const SimReport r = run_scenario(stack);
  const DelayStats rlc = delay_statistics(r.rlc_pdu_delays_us, bin_width_us);
  const DelayStats pdcp = delay_statistics(r.pdcp_sdu_delays_us, bin_width_us);

  fs::create_directories(dir);
  write_checked_csv(dir / "rlc_delays.csv", delay_csv_schema(),
                    [&](std::ostream& f) { write_delay_csv(f, r.rlc_pdu_delays_us); });
  write_checked_csv(dir / "pdcp_delays.csv", delay_csv_schema(),
                    [&](std::ostream& f) { write_delay_csv(f, r.pdcp_sdu_delays_us); });
  write_checked_csv(dir / "histogram.csv", histogram_csv_schema(),
                    [&](std::ostream& f) { write_histogram_csv(f, rlc); });
  write_checked_csv(dir / "pdcp_histogram.csv", histogram_csv_schema(),
                    [&](std::ostream& f) { write_histogram_csv(f, pdcp); });

  std::string s = strprintf("seed %llu (%s), HARQ %s, bler %g, one-way %lld us\n",
                            static_cast<unsigned long long>(r.seed), r.rng_algorithm.c_str(),
                            stack.harq.enabled ? "on" : "off", stack.link.bler,
                            static_cast<long long>(stack.link.one_way_delay_us));
  s += layer_line("rlc", r.rlc);
  s += layer_line("pdcp", r.pdcp);
  s += quantile_line("rlc", rlc);
  s += quantile_line("pdcp", pdcp);
  s += "harq tx by attempt:";
  for (std::uint64_t n : r.harq_tx_by_attempt) s += strprintf(" %llu", static_cast<unsigned long long>(n));
  s += strprintf("\nrlc retransmissions %llu, status reports %llu\n",
                 static_cast<unsigned long long>(r.rlc_retransmissions),
                 static_cast<unsigned long long>(r.status_reports));
  s += strprintf("pdcp delay in [0.8, 2] s: %.4f, > 2 s: %.4f\n",
                 fraction_in_range(r.pdcp_sdu_delays_us, 800000, 2000000),
                 1.0 - fraction_in_range(r.pdcp_sdu_delays_us, 0, 2000000));
  s += strprintf("throughput %.2f bit/s, harq utilization %.6f (bound %.6f)\n",
                 r.throughput_bits_per_s, r.harq_utilization,
                 harq_utilization_bound(stack.harq, stack.link));
  return s;
}

std::string cmd_simulate(const Scenario& sc, const fs::path& out, int sweep) {
  if (sweep < 1) throw ConfigError("--sweep must be >= 1");
  const StackScenario base = sc.stack();
  if (sweep == 1) return simulate_into(base, sc.run.bin_width_us, out);

  std::vector<std::future<std::string>> runs;
  runs.reserve(static_cast<std::size_t>(sweep));
  for (int k = 0; k < sweep; ++k) {
    StackScenario st = base;
    st.traffic.rng_seed = base.traffic.rng_seed + static_cast<std::uint64_t>(k);
    const fs::path dir = out / ("seed_" + std::to_string(st.traffic.rng_seed));
    runs.push_back(std::async(std::launch::async, [st, dir, bin = sc.run.bin_width_us] {
      return simulate_into(st, bin, dir);
    }));
  }
  std::string s;
  for (auto& f : runs) s += f.get() + "\n";
  return s;
}

}  // namespace ntn::cli
