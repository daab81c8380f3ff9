#include "parc/reply_cache.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>
#include <unistd.h>

#include "parc/error.hpp"

namespace parc {

namespace {

std::string sha256_hex(const std::string& payload) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!EVP_Digest(payload.data(), payload.size(), digest, &length, EVP_sha256(), nullptr)) {
    throw Error(ErrorCode::ConfigError, "SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace

ReplyCache::ReplyCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorCode::Unreadable,
                "cannot create cache directory " + dir_.string() + ": " + ec.message());
  }
}

std::string ReplyCache::key_hash(const std::string& model, const std::string& system,
                                 const std::string& instruction) {
  // \x1e separators keep (model, system, instruction) boundaries unambiguous.
  std::string payload;
  payload.reserve(model.size() + system.size() + instruction.size() + 2);
  payload += model;
  payload += '\x1e';
  payload += system;
  payload += '\x1e';
  payload += instruction;
  return sha256_hex(payload);
}

std::optional<std::string> ReplyCache::lookup(const std::string& key) const {
  std::ifstream in(dir_ / (key + ".txt"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void ReplyCache::store(const std::string& key, const std::string& reply) const {
  std::filesystem::path final_path = dir_ / (key + ".txt");
  std::error_code ec;
  if (std::filesystem::exists(final_path, ec)) return;  // write-once
  std::filesystem::path temp_path =
      dir_ / (key + ".tmp." + std::to_string(::getpid()) + "." +
              std::to_string(reinterpret_cast<std::uintptr_t>(&reply)));
  {
    std::ofstream out(temp_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::Unreadable, "cannot write cache entry " + temp_path.string());
    }
    out << reply;
  }
  std::filesystem::rename(temp_path, final_path, ec);
  if (ec) {
    std::filesystem::remove(temp_path, ec);
  }
}

}  // namespace parc
