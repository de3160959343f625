#include "stackctl/digest.hpp"

#include <openssl/evp.h>

#include "stackctl/errors.hpp"

namespace stackctl {

std::string sha256_digest(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw_domain("SHA-256 computation failed");
    static const char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    out.reserve(out.size() + 2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

}  // namespace stackctl
