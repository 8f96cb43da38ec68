#include "ntnlab/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ntn {

ScenarioError::ScenarioError(int line, const std::string& msg)
    : ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

void RunSettings::validate() const {
  detail::require(std::isfinite(t0_s) && std::isfinite(t1_s), "run t0_s and t1_s must be finite");
  detail::require(t0_s < t1_s, "run t0_s must be < t1_s");
  detail::require(dt_s > 0.0 && std::isfinite(dt_s), "run dt_s must be > 0");
  detail::require(min_elev_deg >= 0.0 && min_elev_deg < 90.0, "run min_elev_deg must be in [0, 90)");
  detail::require(bin_width_us > 0, "run bin_width_us must be > 0");
}

void Scenario::validate() const {
  earth.validate();
  orbit.validate();
  detail::require(!ues.empty(), "at least one UE is required");
  for (const GroundPoint& ue : ues) ue.validate();
  carrier.validate();
  uplink_carrier.validate();
  beam.validate();
  constellation().validate();
  tracking.validate();
  access.prach.validate();
  detail::require(std::isfinite(access.feeder_offset_ms) && access.feeder_offset_ms >= 0.0,
                  "access feeder_offset_ms must be >= 0");
  stack().validate();
  run.validate();
}

StackScenario Scenario::stack() const {
  StackScenario s = sim;
  s.traffic.rng_seed = run.seed;
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("'" + std::string(v) + "' is not a valid number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw ConfigError("'" + std::string(v) + "' is not finite");
  }
  return out;
}

bool parse_bool(std::string_view v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("'" + std::string(v) + "' is not on/off");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bool(bool v) { return v ? "on" : "off"; }

// One configurable key: how to set it from text, how to print it, and which
// invariants to recheck once it changes.
struct Field {
  std::function<void(Scenario&, std::string_view)> set;
  std::function<std::string(const Scenario&)> get;
  std::function<void(const Scenario&)> check;
};

using FieldTable = std::map<std::string, Field, std::less<>>;

template <typename T, typename Sel>
Field number_field(Sel sel, std::function<void(const Scenario&)> check) {
  return {[sel](Scenario& s, std::string_view v) { sel(s) = parse_number<T>(v); },
          [sel](const Scenario& s) {
            if constexpr (std::is_floating_point_v<T>) {
              return fmt_double(sel(s));
            } else {
              return std::to_string(sel(s));
            }
          },
          std::move(check)};
}

template <typename Sel>
Field bool_field(Sel sel, std::function<void(const Scenario&)> check) {
  return {[sel](Scenario& s, std::string_view v) { sel(s) = parse_bool(v); },
          [sel](const Scenario& s) { return fmt_bool(sel(s)); },
          std::move(check)};
}

const std::map<std::string, FieldTable, std::less<>>& sections() {
  static const auto table = [] {
    std::map<std::string, FieldTable, std::less<>> t;
    const auto orbit = [](const Scenario& s) { s.orbit.validate(); };
    const auto earth = [](const Scenario& s) { s.earth.validate(); };
    const auto carrier = [](const Scenario& s) {
      s.carrier.validate();
      s.uplink_carrier.validate();
    };
    const auto beam = [](const Scenario& s) { s.beam.validate(); };
    const auto tracking = [](const Scenario& s) { s.tracking.validate(); };
    const auto access = [](const Scenario& s) {
      s.access.prach.validate();
      detail::require(s.access.feeder_offset_ms >= 0.0, "feeder_offset_ms must be >= 0");
    };
    const auto constellation = [](const Scenario& s) {
      detail::require(s.num_satellites >= 1, "num_satellites must be >= 1");
    };
    const auto link = [](const Scenario& s) { s.sim.link.validate(); };
    const auto harq = [](const Scenario& s) { s.sim.harq.validate(); };
    const auto rlc = [](const Scenario& s) { s.sim.rlc.validate(); };
    const auto traffic = [](const Scenario& s) { s.sim.traffic.validate(); };
    const auto run = [](const Scenario& s) {
      detail::require(s.run.dt_s > 0.0, "dt_s must be > 0");
      detail::require(s.run.min_elev_deg >= 0.0 && s.run.min_elev_deg < 90.0,
                      "min_elev_deg must be in [0, 90)");
      detail::require(s.run.bin_width_us > 0, "bin_width_us must be > 0");
    };

    auto& o = t["orbit"];
    o["altitude_km"] = number_field<double>([](auto& s) -> auto& { return s.orbit.altitude_km; }, orbit);
    o["inclination_deg"] = number_field<double>([](auto& s) -> auto& { return s.orbit.inclination_deg; }, orbit);
    o["raan_deg"] = number_field<double>([](auto& s) -> auto& { return s.orbit.raan_deg; }, orbit);
    o["phase_deg"] = number_field<double>([](auto& s) -> auto& { return s.orbit.phase_deg; }, orbit);

    auto& e = t["earth"];
    e["rotation"] = bool_field([](auto& s) -> auto& { return s.earth.rotation_enabled; }, earth);
    e["radius_km"] = number_field<double>([](auto& s) -> auto& { return s.earth.radius_km; }, earth);
    e["gm_km3_s2"] = number_field<double>([](auto& s) -> auto& { return s.earth.gm_km3_s2; }, earth);
    e["rotation_rate_rad_s"] = number_field<double>([](auto& s) -> auto& { return s.earth.rotation_rate_rad_s; }, earth);

    auto& c = t["carrier"];
    c["f_c_hz"] = number_field<double>([](auto& s) -> auto& { return s.carrier.f_c_hz; }, carrier);
    c["f_ul_hz"] = number_field<double>([](auto& s) -> auto& { return s.uplink_carrier.f_c_hz; }, carrier);

    auto& b = t["beam"];
    b["radius_km"] = number_field<double>([](auto& s) -> auto& { return s.beam.radius_km; }, beam);
    b["mode"] = Field{
        [](Scenario& s, std::string_view v) {
          if (v == "moving") {
            s.beam.mode = BeamMode::moving;
          } else if (v == "earth_fixed") {
            s.beam.mode = BeamMode::earth_fixed;
          } else {
            throw ConfigError("'" + std::string(v) + "' is not moving|earth_fixed");
          }
        },
        [](const Scenario& s) {
          return std::string(s.beam.mode == BeamMode::moving ? "moving" : "earth_fixed");
        },
        beam};
    b["center_lat_deg"] = number_field<double>([](auto& s) -> auto& { return s.beam.center.lat_deg; }, beam);
    b["center_lon_deg"] = number_field<double>([](auto& s) -> auto& { return s.beam.center.lon_deg; }, beam);

    auto& k = t["constellation"];
    k["num_satellites"] = number_field<int>([](auto& s) -> auto& { return s.num_satellites; }, constellation);

    auto& tr = t["tracking"];
    tr["cells_per_ta"] = number_field<int>([](auto& s) -> auto& { return s.tracking.cells_per_ta; }, tracking);
    tr["registered_list_size"] = number_field<int>([](auto& s) -> auto& { return s.tracking.registered_list_size; }, tracking);
    tr["binding"] = Field{
        [](Scenario& s, std::string_view v) {
          if (v == "beam_bound") {
            s.tracking.binding = TaBinding::beam_bound;
          } else if (v == "geo_bound") {
            s.tracking.binding = TaBinding::geo_bound;
          } else {
            throw ConfigError("'" + std::string(v) + "' is not beam_bound|geo_bound");
          }
        },
        [](const Scenario& s) {
          return std::string(s.tracking.binding == TaBinding::beam_bound ? "beam_bound"
                                                                          : "geo_bound");
        },
        tracking};

    auto& a = t["access"];
    a["prach_cp_ms"] = number_field<double>([](auto& s) -> auto& { return s.access.prach.cp_ms; }, access);
    a["residual_ta_error_ms"] = number_field<double>([](auto& s) -> auto& { return s.access.prach.residual_ta_error_ms; }, access);
    a["feeder_offset_ms"] = number_field<double>([](auto& s) -> auto& { return s.access.feeder_offset_ms; }, access);

    auto& m = t["sim"];
    m["link.one_way_delay_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.link.one_way_delay_us; }, link);
    m["link.tti_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.link.tti_us; }, link);
    m["link.tb_size_bits"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.link.tb_size_bits; }, link);
    m["link.bler"] = number_field<double>([](auto& s) -> auto& { return s.sim.link.bler; }, link);
    m["link.feedback_error_prob"] = number_field<double>([](auto& s) -> auto& { return s.sim.link.feedback_error_prob; }, link);
    m["harq.enabled"] = bool_field([](auto& s) -> auto& { return s.sim.harq.enabled; }, harq);
    m["harq.num_processes"] = number_field<int>([](auto& s) -> auto& { return s.sim.harq.num_processes; }, harq);
    m["harq.max_transmissions"] = number_field<int>([](auto& s) -> auto& { return s.sim.harq.max_transmissions; }, harq);
    m["harq.node_processing_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.harq.node_processing_us; }, harq);
    m["rlc.pdu_payload_bits"] = Field{
        [](Scenario& s, std::string_view v) { s.sim.rlc.pdu_payload_bits = parse_number<std::int64_t>(v); },
        [](const Scenario& s) {
          return s.sim.rlc.pdu_payload_bits ? std::to_string(*s.sim.rlc.pdu_payload_bits)
                                            : std::string();
        },
        rlc};
    m["rlc.t_reassembly_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.rlc.t_reassembly_us; }, rlc);
    m["rlc.t_status_prohibit_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.rlc.t_status_prohibit_us; }, rlc);
    m["rlc.t_poll_retransmit_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.rlc.t_poll_retransmit_us; }, rlc);
    m["rlc.poll_on_last_pdu"] = bool_field([](auto& s) -> auto& { return s.sim.rlc.poll_on_last_pdu; }, rlc);
    m["rlc.max_rlc_retx"] = number_field<int>([](auto& s) -> auto& { return s.sim.rlc.max_rlc_retx; }, rlc);
    m["traffic.packet_size_bytes"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.traffic.packet_size_bytes; }, traffic);
    m["traffic.period_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.traffic.period_us; }, traffic);
    m["traffic.num_packets"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.sim.traffic.num_packets; }, traffic);

    auto& r = t["run"];
    r["t0_s"] = number_field<double>([](auto& s) -> auto& { return s.run.t0_s; }, run);
    r["t1_s"] = number_field<double>([](auto& s) -> auto& { return s.run.t1_s; }, run);
    r["dt_s"] = number_field<double>([](auto& s) -> auto& { return s.run.dt_s; }, run);
    r["seed"] = number_field<std::uint64_t>([](auto& s) -> auto& { return s.run.seed; }, run);
    r["min_elev_deg"] = number_field<double>([](auto& s) -> auto& { return s.run.min_elev_deg; }, run);
    r["bin_width_us"] = number_field<std::int64_t>([](auto& s) -> auto& { return s.run.bin_width_us; }, run);
    return t;
  }();
  return table;
}

// "ue" and "ue.N" map to ues[N]; returns -1 for other names.
int ue_index(std::string_view section) {
  if (section == "ue") return 0;
  if (section.substr(0, 3) != "ue.") return -1;
  const std::string_view digits = section.substr(3);
  int idx = -1;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || idx < 0 || idx > 4096) return -1;
  return idx;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::string section;
  int ue = -1;
  const FieldTable* fields = nullptr;
  int line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      ue = ue_index(section);
      fields = nullptr;
      if (ue >= 0) {
        if (static_cast<std::size_t>(ue) >= s.ues.size()) s.ues.resize(static_cast<std::size_t>(ue) + 1);
        continue;
      }
      const auto it = sections().find(section);
      if (it == sections().end()) throw ScenarioError(line_no, "unknown section [" + section + "]");
      fields = &it->second;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ScenarioError(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string where = section + "." + std::string(key);
    if (section.empty()) throw ScenarioError(line_no, "key '" + std::string(key) + "' outside a section");
    if (value.empty()) throw ScenarioError(line_no, where + ": missing value");

    try {
      if (ue >= 0) {
        GroundPoint& gp = s.ues[static_cast<std::size_t>(ue)];
        if (key == "lat_deg") {
          gp.lat_deg = parse_number<double>(value);
        } else if (key == "lon_deg") {
          gp.lon_deg = parse_number<double>(value);
        } else {
          throw ScenarioError(line_no, "unknown key '" + where + "'");
        }
        gp.validate();
        continue;
      }
      const auto f = fields->find(key);
      if (f == fields->end()) throw ScenarioError(line_no, "unknown key '" + where + "'");
      f->second.set(s, value);
      f->second.check(s);
    } catch (const ScenarioError&) {
      throw;
    } catch (const ConfigError& e) {
      throw ScenarioError(line_no, where + ": " + e.what());
    }
  }

  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ScenarioError(0, e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& scenario) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, fields] : sections()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
    for (const auto& [key, field] : fields) {
      const std::string v = field.get(scenario);
      if (!v.empty()) out << key << " = " << v << '\n';
    }
  }
  for (std::size_t i = 0; i < scenario.ues.size(); ++i) {
    out << "\n[ue." << i << "]\n"
        << "lat_deg = " << fmt_double(scenario.ues[i].lat_deg) << '\n'
        << "lon_deg = " << fmt_double(scenario.ues[i].lon_deg) << '\n';
  }
  return out.str();
}

}  // namespace ntn
