#pragma once

#include "hus/harness.hpp"
#include "hus/second_order.hpp"

#include <ostream>
#include <string>

namespace hus {

// %.17g: round-trip exact for binary64, byte-stable across runs.
std::string format_double(double v);

std::string to_json(const StabilityReport& report,
                    const CertificationSummary* cert = nullptr);
std::string to_json(const SecondOrderReport& report);

// Columns: t, phi1, phi2, x1, x2, dev. Missing x columns are written as 0.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);

}  // namespace hus
