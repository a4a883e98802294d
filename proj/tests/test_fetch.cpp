#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "cmapsum/errors.hpp"
#include "cmapsum/fetch.hpp"
#include "support/helpers.hpp"

using namespace cmapsum;
using namespace cmapsum::corpus;

namespace {

// Serves the fixture archive over localhost so the full download ->
// verify -> unpack -> import path runs without external network.
class FixtureServer {
 public:
  FixtureServer() {
    archive_ = testsupport::read_file(testsupport::data_dir() / "corpus_fixture.tar.gz");
    server_.Get("/corpus.tar.gz", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.set_content(archive_, "application/gzip");
    });
    server_.Get("/corrupted.tar.gz", [this](const httplib::Request&, httplib::Response& res) {
      std::string broken = archive_;
      if (!broken.empty()) broken[broken.size() / 2] ^= 0x5A;
      res.set_content(broken, "application/gzip");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FixtureServer() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  int hits() const { return hits_; }
  const std::string& archive() const { return archive_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  std::string archive_;
  std::atomic<int> hits_{0};
  int port_ = 0;
};

}  // namespace

TEST_CASE("sha256 of a known vector") {
  // FIPS 180-2 test vector for "abc".
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fetch downloads, verifies, unpacks and caches") {
  FixtureServer server;
  testsupport::TempDir tmp("fetch");

  FetchOptions options;
  options.url = server.url("/corpus.tar.gz");
  options.sha256 = sha256_hex(server.archive());
  options.dest = tmp.path();

  const auto first = fetch_corpus(options);
  CHECK(!first.cache_hit);
  CHECK(first.topic_count == 2);
  CHECK(std::filesystem::exists(first.corpus_dir / "topicA" / "doc1.txt"));
  CHECK(server.hits() == 1);

  const auto second = fetch_corpus(options);
  CHECK(second.cache_hit);
  CHECK(second.topic_count == 2);
  CHECK(server.hits() == 1);  // no new download

  options.force = true;
  const auto third = fetch_corpus(options);
  CHECK(!third.cache_hit);
  CHECK(server.hits() == 2);
}

TEST_CASE("checksum mismatch aborts and keeps nothing") {
  FixtureServer server;
  testsupport::TempDir tmp("fetch_bad");

  FetchOptions options;
  options.url = server.url("/corrupted.tar.gz");
  options.sha256 = sha256_hex(server.archive());
  options.dest = tmp.path();

  CHECK_THROWS_AS(fetch_corpus(options), ValidationError);
  CHECK(!std::filesystem::exists(tmp.path() / "corpus"));
  CHECK(!std::filesystem::exists(tmp.path() / ".cmapsum_fetch.json"));
}

TEST_CASE("missing or malformed pins are rejected up front") {
  FetchOptions options;
  options.dest = "/tmp/never_used";
  options.sha256 = "";
  CHECK_THROWS_AS(fetch_corpus(options), ValidationError);
  options.sha256 = "tooshort";
  CHECK_THROWS_AS(fetch_corpus(options), ValidationError);
}
