#include "itt/identity/password.hpp"

#include <sodium.h>

#include <stdexcept>

namespace itt::identity {

KdfParams KdfParams::minimal() {
  return {crypto_pwhash_argon2id_OPSLIMIT_MIN, crypto_pwhash_argon2id_MEMLIMIT_MIN};
}

std::size_t password_length(std::string_view password) noexcept {
  std::size_t n = 0;
  for (unsigned char c : password) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

PasswordHasher::PasswordHasher(KdfParams params) : params_(params) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
}

std::string PasswordHasher::hash(std::string_view password) const {
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str_alg(out, password.data(), password.size(), params_.iterations,
                            params_.memory_bytes, crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw std::runtime_error("password hashing failed (out of memory?)");
  }
  return out;
}

bool PasswordHasher::verify(std::string_view encoded, std::string_view password) const noexcept {
  std::string owned{encoded};
  return crypto_pwhash_str_verify(owned.c_str(), password.data(), password.size()) == 0;
}

}  // namespace itt::identity
