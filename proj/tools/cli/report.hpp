#pragma once

// Serialization of catalog listings, verification reports, deformation
// values and identity tables.  Every double is written with 17 significant
// digits so that reports round-trip exactly.

#include <iosfwd>
#include <string>

#include "finsler/catalog.hpp"
#include "finsler/riemann.hpp"
#include "json.hpp"

namespace finsler::cli {

inline constexpr const char* kReportSchema = "finsler-verify/1";

/// Compact JSON with %.17g numbers; non-finite numbers become null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

nlohmann::json catalog_json(const std::vector<CatalogInfo>& entries);
/// The run-dependent timestamp and wall time live under the single key
/// "timing"; everything else is a pure function of the configuration.
nlohmann::json report_json(const VerificationReport& report);

std::string report_csv(const VerificationReport& report);
std::string report_text(const VerificationReport& report);
std::string catalog_text(const std::vector<CatalogInfo>& entries);

std::string format_double(double v);

}  // namespace finsler::cli
