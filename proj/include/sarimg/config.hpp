#pragma once

#include <map>
#include <string>

#include "sarimg/pipeline.hpp"

namespace sarimg::config {

/// Parsed key-value config: section -> key -> raw value. Sections and keys
/// are kept sorted so serialization is canonical.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

/// Flat INI-style grammar: `[section]` headers, `key = value` lines, blank
/// lines and full-line `#`/`;` comments. Exact key set documented in the
/// README. Throws std::invalid_argument with a line number on bad syntax.
ConfigMap parse_string(const std::string& text);
ConfigMap parse_file(const std::string& path);

std::string serialize(const ConfigMap& map);

void set_value(ConfigMap& map, const std::string& section,
               const std::string& key, const std::string& value);

/// Validates and converts to a typed experiment config. Unknown sections or
/// keys are errors.
pipeline::ExperimentConfig to_experiment(const ConfigMap& map);

}  // namespace sarimg::config
