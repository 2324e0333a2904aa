#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "droca/automaton.hpp"

namespace droca {

struct LoadOptions {
  // Route every missing transition to a fresh non-final sink instead of
  // rejecting the machine as incomplete.
  bool complete_with_sink = false;
};

/// Parses the JSON automaton format. Throws ParseError naming the field.
DrocaDraft parse_draft(std::string_view text);
Droca load(std::string_view text, const LoadOptions& options = {});
Droca load_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Canonical serialisation: fixed key order, states and letters in their
/// declared order. Byte-identical for equal machines.
std::string store(const Droca& a);
void store_file(const Droca& a, const std::filesystem::path& path);

}  // namespace droca
