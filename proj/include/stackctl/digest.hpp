#pragma once

#include <string>
#include <string_view>

namespace stackctl {

// Hex-encoded SHA-256, prefixed "sha256:".
std::string sha256_digest(std::string_view bytes);

}  // namespace stackctl
