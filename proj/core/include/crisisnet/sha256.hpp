#pragma once

#include <string>
#include <string_view>

namespace crisisnet {

// FIPS 180-4 SHA-256, lowercase hex digest. Self-contained so the report
// manifest does not pull in a crypto library for one hash.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);

} // namespace crisisnet
