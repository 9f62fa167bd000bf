// Instance / allocation / report serialization and the instance digest.
//
// Instance JSON: {"rate_model": "log_snr"|"linear", "num_users": M,
// "num_channels": N, "gains": [[...], ...], "rate_targets": [...],
// "channel_groups": [...] (optional)}. Unknown keys are ignored.
// Allocation JSON: {"channel_owner": [1-based id or null, ...],
// "rates": [...], "powers": [...]}. A report adds "objective",
// "algorithm", "wall_time_s" and "instance_digest".
#pragma once

#include <string>
#include <string_view>

#include "mpca/model.hpp"

namespace mpca {

/// Parses instance JSON. Throws MpcaError(ParseError) with a field or
/// position diagnostic on malformed input. Does not run validate().
MpcaInstance read_instance(std::string_view bytes);

/// Canonical serialization: compact JSON with sorted keys and shortest
/// round-trip float formatting, so read(write(x)) == x bit-exactly.
std::string write_instance(const MpcaInstance& instance);

std::string write_allocation(const Allocation& allocation);
Allocation read_allocation(std::string_view bytes, int num_users);

std::string write_report(const SolveReport& report);

/// Lowercase hex SHA-256 of the canonical instance bytes.
std::string instance_digest(const MpcaInstance& instance);

std::string sha256_hex(std::string_view bytes);

}  // namespace mpca
