#ifndef PCBODY_COMMON_HASH_H_
#define PCBODY_COMMON_HASH_H_

#include <string>
#include <string_view>

namespace pcbody {

// Lower-case hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);
std::string Sha256File(const std::string& path);

}  // namespace pcbody

#endif  // PCBODY_COMMON_HASH_H_
