#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace parc {

/// Disk cache of raw judge replies, keyed by a SHA-256 of model + prompt.
/// Entries are write-once (temp file + rename), so concurrent writers of the
/// same key are safe and a key's content never changes after first store.
class ReplyCache {
 public:
  explicit ReplyCache(std::filesystem::path dir);

  static std::string key_hash(const std::string& model, const std::string& system,
                              const std::string& instruction);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& reply) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace parc
