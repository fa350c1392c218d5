#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "relaycc/relay_gain.hpp"

namespace relaycc {

/// Column order of every emitted table.
const std::vector<std::string>& csv_columns();

/// Values printed with 6 significant digits; FD rows leave alpha empty.
void write_csv(std::ostream& os, const SweepTable& table);
std::string to_csv(const SweepTable& table);

/// Parses what write_csv emits. Metadata is not part of the CSV; the
/// returned table only carries rows.
SweepTable parse_csv(std::string_view text);

/// Rows as in the CSV plus a "metadata" object; a non-empty manifest_json
/// (a JSON document) is embedded under "manifest".
std::string to_json(const SweepTable& table, std::string_view manifest_json = {}, int indent = 2);

}  // namespace relaycc
