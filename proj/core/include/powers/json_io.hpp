#pragma once

#include <json.hpp>

#include "powers/algebra.hpp"
#include "powers/norm_bounds.hpp"
#include "powers/powers_engine.hpp"

namespace powers {

inline constexpr const char* kCertificateSchema = "powers-cert/1";
inline constexpr const char* kReportSchema = "powers-report/1";

nlohmann::json descriptor_to_json(const GroupDescriptor& desc);
GroupDescriptor descriptor_from_json(const nlohmann::json& j);

/// Element format: { "group": descriptor, "mode": "exact"|"float",
/// "terms": [ { "word": "<text>", "coeff": "p/q" | number } ] }.
nlohmann::json element_to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const nlohmann::json& j);

nlohmann::json bound_config_to_json(const BoundConfig& cfg);
BoundConfig bound_config_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const NormEstimate& est);

nlohmann::json search_config_to_json(const SearchConfig& cfg);

/// Certificate schema "powers-cert/1"; all rationals are "p/q" strings
/// and round-trip bit-exactly.
nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json dixmier_report_to_json(const DixmierReport& report);

}  // namespace powers
