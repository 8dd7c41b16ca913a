#pragma once

#include <string>

namespace lcsde {

// SHA-256 hex digest, used for the run manifest's reproducibility check.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

} // namespace lcsde
