#pragma once

#include <filesystem>
#include <string>

namespace cmapsum::corpus {

// Release archive of the evaluation corpus (30 topic directories).
// The checksum pins the exact bytes; fetch_corpus refuses to unpack
// anything else. fill in a verified value via --sha256 / pin_checksum
// when mirroring the archive yourself.
inline constexpr const char* kDefaultCorpusUrl =
    "https://github.com/UKPLab/emnlp2017-cmapsum-corpus/archive/refs/heads/master.tar.gz";

struct FetchOptions {
  std::string url = kDefaultCorpusUrl;
  std::string sha256;  // required: lowercase hex digest of the archive
  std::filesystem::path dest;
  bool force = false;  // re-download even on a cache hit
};

struct FetchResult {
  std::filesystem::path corpus_dir;
  bool cache_hit = false;
  std::size_t topic_count = 0;
};

// Single HTTP(S) GET -> SHA-256 check -> unpack (tar.gz) -> importer
// smoke run. A checksum mismatch aborts and keeps nothing. Results are
// cached in dest; a matching cache skips the download.
FetchResult fetch_corpus(const FetchOptions& options);

// Hex SHA-256 of a byte string / file.
std::string sha256_hex(const std::string& bytes);
std::string sha256_hex_file(const std::filesystem::path& path);

}  // namespace cmapsum::corpus
