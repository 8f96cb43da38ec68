#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ntnlab/scenario.hpp"

namespace ntn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Full command line including the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Arguments without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// fig2a fig2b fig3a fig3b fig4a fig4b fig5
const std::vector<std::string>& recipe_names();

/// Writes the recipe's CSV files into out_dir and returns its summary text.
/// Throws ConfigError for an unknown name.
std::string run_recipe(std::string_view name, const Scenario& scenario,
                       const std::filesystem::path& out_dir);

}  // namespace ntn::cli
