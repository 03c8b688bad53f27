#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "laud/core.hpp"

namespace laud {

/// Reads newline-delimited records `{"id": ..., "text": ..., "label": bool?}`.
/// Duplicate ids, empty text and malformed lines are rejected with the line
/// number (and the id, for duplicates).
Pool ingest_pool(std::istream& in);
Pool load_pool(const std::filesystem::path& path);

/// Writes the same record format. Hidden labels are included when present.
void write_pool(std::ostream& out, const Pool& pool);

}  // namespace laud
