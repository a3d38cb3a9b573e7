#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace itt::identity {

inline constexpr std::size_t kMinPasswordLength = 8;

// Argon2id cost. The default is the deployment setting; tests may lower it.
struct KdfParams {
  unsigned long long iterations = 3;
  std::size_t memory_bytes = std::size_t{64} << 20;

  static KdfParams production() { return {}; }
  static KdfParams minimal();
};

/// Length in code points, so multi-byte characters count once.
std::size_t password_length(std::string_view password) noexcept;

class PasswordHasher {
 public:
  explicit PasswordHasher(KdfParams params = KdfParams::production());

  /// Encoded Argon2id string with the salt and parameters inline.
  std::string hash(std::string_view password) const;
  bool verify(std::string_view encoded, std::string_view password) const noexcept;

  const KdfParams& params() const noexcept { return params_; }

 private:
  KdfParams params_;
};

}  // namespace itt::identity
