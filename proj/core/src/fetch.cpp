#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cmapsum/corpus.hpp"
#include "cmapsum/errors.hpp"
#include "cmapsum/fetch.hpp"

namespace cmapsum::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: EVP_Digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_hex_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for hashing: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

namespace {

struct ParsedUrl {
  bool https = false;
  std::string host;
  int port = 0;
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl out;
  std::string rest;
  if (url.starts_with("https://")) {
    out.https = true;
    out.port = 443;
    rest = url.substr(8);
  } else if (url.starts_with("http://")) {
    out.port = 80;
    rest = url.substr(7);
  } else {
    throw ValidationError("unsupported URL scheme: " + url);
  }
  const auto slash = rest.find('/');
  std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.find(':');
  if (colon != std::string::npos) {
    out.host = authority.substr(0, colon);
    out.port = std::stoi(authority.substr(colon + 1));
  } else {
    out.host = authority;
  }
  if (out.host.empty()) throw ValidationError("URL has no host: " + url);
  return out;
}

std::string http_get(const std::string& url) {
  const ParsedUrl parsed = parse_url(url);
  httplib::Result res;
  if (parsed.https) {
    httplib::SSLClient client(parsed.host, parsed.port);
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);
    res = client.Get(parsed.path);
  } else {
    httplib::Client client(parsed.host, parsed.port);
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);
    res = client.Get(parsed.path);
  }
  if (!res) {
    throw IoError("download failed for " + url + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw IoError("download failed for " + url + ": HTTP " + std::to_string(res->status));
  }
  return res->body;
}

// Directory holding the topic directories: the shallowest directory
// with at least two subdirectories that contain .txt files.
fs::path locate_corpus_root(const fs::path& unpacked) {
  const auto looks_like_topic = [](const fs::path& dir) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") return true;
      if (entry.is_directory() && (entry.path().filename() == "docs" ||
                                   entry.path().filename() == "documents")) {
        return true;
      }
    }
    return false;
  };
  std::vector<fs::path> queue{unpacked};
  while (!queue.empty()) {
    std::vector<fs::path> next;
    for (const auto& dir : queue) {
      std::size_t topic_dirs = 0;
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() && looks_like_topic(entry.path())) ++topic_dirs;
      }
      if (topic_dirs >= 2) return dir;
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) next.push_back(entry.path());
      }
    }
    std::sort(next.begin(), next.end());
    queue = std::move(next);
  }
  throw ValidationError("no topic directories found in unpacked archive");
}

std::size_t importer_smoke_run(const fs::path& corpus_root) {
  std::size_t loaded = 0;
  std::vector<fs::path> topics;
  for (const auto& entry : fs::directory_iterator(corpus_root)) {
    if (entry.is_directory()) topics.push_back(entry.path());
  }
  std::sort(topics.begin(), topics.end());
  for (const auto& topic : topics) {
    try {
      load_topic(topic, TopicFormat::kAuto);
      ++loaded;
    } catch (const std::exception& e) {
      std::cerr << "[fetch] skipping topic " << topic.filename().string() << ": " << e.what()
                << "\n";
    }
  }
  if (loaded == 0) throw ValidationError("importer could not load any topic");
  return loaded;
}

}  // namespace

FetchResult fetch_corpus(const FetchOptions& options) {
  if (options.dest.empty()) throw ValidationError("fetch_corpus: empty destination");
  if (options.sha256.size() != 64) {
    throw ValidationError(
        "fetch_corpus: a 64-hex-digit sha256 pin is required; pass the digest of a "
        "verified archive");
  }

  const fs::path marker_path = options.dest / ".cmapsum_fetch.json";
  const fs::path corpus_dir = options.dest / "corpus";

  if (!options.force && fs::exists(marker_path) && fs::exists(corpus_dir)) {
    std::ifstream marker(marker_path);
    json j;
    try {
      marker >> j;
    } catch (const json::exception&) {
      j = json::object();
    }
    if (j.value("url", "") == options.url && j.value("sha256", "") == options.sha256) {
      FetchResult result;
      result.corpus_dir = corpus_dir;
      result.cache_hit = true;
      result.topic_count = j.value("topics", std::size_t{0});
      return result;
    }
  }

  const std::string body = http_get(options.url);
  const std::string digest = sha256_hex(body);
  if (digest != options.sha256) {
    throw ValidationError("fetch_corpus: checksum mismatch (expected " + options.sha256 +
                          ", got " + digest + "); nothing was unpacked");
  }

  std::error_code ec;
  fs::create_directories(options.dest, ec);
  if (ec) throw IoError("cannot create destination: " + options.dest.string());

  const fs::path tmp_dir = options.dest / ".unpack_tmp";
  fs::remove_all(tmp_dir, ec);
  fs::create_directories(tmp_dir, ec);
  if (ec) throw IoError("cannot create unpack directory: " + tmp_dir.string());

  const fs::path archive = tmp_dir / "corpus_archive.tar.gz";
  {
    std::ofstream out(archive, std::ios::binary);
    if (!out) throw IoError("cannot write archive: " + archive.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
  }

  const std::string command = "tar -xzf '" + archive.string() + "' -C '" +
                              tmp_dir.string() + "'";
  if (std::system(command.c_str()) != 0) {
    fs::remove_all(tmp_dir, ec);
    throw IoError("tar failed to unpack the corpus archive");
  }
  fs::remove(archive, ec);

  FetchResult result;
  try {
    const fs::path root = locate_corpus_root(tmp_dir);
    result.topic_count = importer_smoke_run(root);
    fs::remove_all(corpus_dir, ec);
    fs::rename(root, corpus_dir, ec);
    if (ec) {
      // Cross-device fallback: copy.
      fs::copy(root, corpus_dir, fs::copy_options::recursive);
    }
  } catch (...) {
    fs::remove_all(tmp_dir, ec);
    throw;
  }
  fs::remove_all(tmp_dir, ec);

  std::ofstream marker(marker_path);
  marker << json{{"url", options.url}, {"sha256", options.sha256}, {"topics", result.topic_count}}
                .dump(2)
         << "\n";
  result.corpus_dir = corpus_dir;
  result.cache_hit = false;
  return result;
}

}  // namespace cmapsum::corpus
