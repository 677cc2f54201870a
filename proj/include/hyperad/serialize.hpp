#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hyperad/hypernet.hpp"

namespace hyperad {

inline constexpr int kFormatVersion = 1;

class SerializationError : public Error {
public:
    using Error::Error;
};

/// JSON document of a net. Ids are renumbered canonically: a depth-first walk
/// in canonical edge order visiting sources, the box interior, then targets.
nlohmann::json to_json(const Hypernet& h);
std::string to_json_string(const Hypernet& h, int indent = 2);

/// Rebuilds a net. Structural problems (unknown version, dangling ids,
/// malformed types or labels) raise SerializationError; invariants are left
/// to `validate`.
Hypernet from_json(const nlohmann::json& doc);
Hypernet from_json_string(const std::string& text);

/// Graphviz rendering; boxes become clusters and interface positions become
/// numbered port nodes.
std::string to_dot(const Hypernet& h);

/// Plain listing used by `--format text`.
std::string to_text(const Hypernet& h);

}  // namespace hyperad
