#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ntnlab/csv.hpp"
#include "ntnlab/geometry.hpp"
#include "ntnlab/scenario.hpp"

namespace ntn::cli {

namespace fs = std::filesystem;

template <typename... Args>
std::string strprintf(const char* format, Args... args) {
  const int n = std::snprintf(nullptr, 0, format, args...);
  std::string s(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(s.data(), s.size(), format, args...);
  s.pop_back();
  return s;
}

/// Writes a CSV through `body`, then re-reads it against the schema.
template <typename Fn>
void write_checked_csv(const fs::path& path, const CsvSchema& schema, Fn&& body) {
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    body(f);
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path.string());
  }
  if (const std::string problem = check_csv_file(path, schema); !problem.empty()) {
    throw std::logic_error(path.string() + ": " + problem);
  }
}

void write_text(const fs::path& path, std::string_view text);

/// The pass of `gp` whose peak is closest to t = 0 within half an orbital
/// period. Throws NoServingLink when there is none.
Pass central_pass(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                  double min_elev_deg);

std::string cmd_trace(const Scenario& sc, std::size_t ue, const fs::path& out);
std::string cmd_pass(const Scenario& sc);
std::string cmd_access(const Scenario& sc);
std::string cmd_coverage(const Scenario& sc, const fs::path& out);
/// Seeds run.seed .. run.seed + sweep - 1; with sweep > 1 each seed gets a
/// seed_N subdirectory.
std::string cmd_simulate(const Scenario& sc, const fs::path& out, int sweep);

/// Runs one stack scenario and writes rlc_delays.csv, pdcp_delays.csv,
/// histogram.csv (RLC PDU) and pdcp_histogram.csv into dir.
std::string simulate_into(const StackScenario& stack, std::int64_t bin_width_us,
                          const fs::path& dir);

}  // namespace ntn::cli
