#pragma once

#include <string>
#include <vector>

#include "bvloc/localization.hpp"

namespace bvloc {

// Shortest decimal string that parses back to the exact same double.
std::string format_double(double v);

std::string localization_json(const LocalizationReport& r);
std::string localization_table(const LocalizationReport& r);

std::string sweep_json(const SweepResult& s);
std::string sweep_csv(const SweepResult& s);
std::string sweep_table(const SweepResult& s);
// Self-contained plot of both components over the t grid.
std::string sweep_svg(const SweepResult& s);

std::string phase_json(const std::string& entry,
                       const std::vector<PhasePoint>& pts);
std::string phase_table(const std::string& entry,
                        const std::vector<PhasePoint>& pts);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace bvloc
