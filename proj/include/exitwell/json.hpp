#pragma once
#include <json.hpp>

namespace exitwell {
// insertion-ordered documents keep reports stable and diffable
using ordered_json = nlohmann::ordered_json;
}  // namespace exitwell
