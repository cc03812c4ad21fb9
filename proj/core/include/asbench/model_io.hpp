#pragma once

#include <filesystem>
#include <string>

#include "asbench/selectors.hpp"

namespace asbench {

inline constexpr int kModelFormatVersion = 1;

/// Model artifact: one compact JSON object with "format":
/// "asbench-selector-model" and "version": 1. Trees are stored column-wise
/// (feature, threshold, left, right, value arrays indexed by node) and
/// matrices as {rows, cols, data}. Doubles are written with enough digits to
/// round-trip exactly, so parse(format(m)) == m.
std::string format_model(const SelectorModel& model);

/// Throws InvalidInput on malformed JSON, a foreign format tag, a version
/// other than kModelFormatVersion or inconsistent contents.
SelectorModel parse_model(const std::string& contents, const std::string& file_name);

void write_model(const SelectorModel& model, const std::filesystem::path& path);
SelectorModel read_model(const std::filesystem::path& path);

}  // namespace asbench
