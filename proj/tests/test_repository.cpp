#include "roofline/errors.hpp"
#include "roofline/repository.hpp"

#include "support/test_support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

namespace roofline {
namespace {

namespace fs = std::filesystem;
using testing::FixtureRepo;
using testing::TempDir;

std::string sample_bytes(const std::string& name) { return read_file(testing::sample(name)); }

class RepositoryTest : public ::testing::Test {
protected:
    void SetUp() override {
        repo_.add("toy", sample_bytes("toy.roofline.json"), {"teaching"});
        repo_.add("cluster", sample_bytes("cluster-node.roofline.json"), {"xeon", "example"});
    }

    FixtureRepo repo_;
    TempDir cache_;
    RepositoryClient client_{std::chrono::seconds(2)};
};

TEST_F(RepositoryTest, FetchIndex) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    ASSERT_EQ(index.entries.size(), 2u);
    EXPECT_EQ(index.entries[0].id, "toy");
    EXPECT_EQ(index.entries[0].machine_name, "toy");
    EXPECT_EQ(index.entries[1].tags, (std::vector<std::string>{"xeon", "example"}));
    EXPECT_EQ(client_.fetch_index(repo_.base_url() + "/").entries.size(), 2u);
}

TEST_F(RepositoryTest, MissingIndexIsRemoteError) {
    repo_.remove_index();
    try {
        client_.fetch_index(repo_.base_url());
        FAIL() << "expected RemoteError";
    } catch (const RemoteError& e) {
        EXPECT_EQ(e.status(), 404);
    }
}

TEST_F(RepositoryTest, MalformedIndexIsFormatError) {
    const std::string sha(64, 'a');
    auto entry = [&](const std::string& id) {
        return R"({"id":")" + id + R"(","url":"http://x/y","sha256":")" + sha +
               R"(","machine_name":"m","created":"2026-01-01T00:00:00Z","tags":[]})";
    };
    repo_.set_index(R"({"repo_version":"1.0","entries":[)" + entry("a") + "," + entry("a") + "]}");
    EXPECT_THROW(client_.fetch_index(repo_.base_url()), FormatError);

    repo_.set_index(R"({"repo_version":"1.0","entries":[)" + entry("../up") + "]}");
    EXPECT_THROW(client_.fetch_index(repo_.base_url()), FormatError);

    repo_.set_index("not json");
    EXPECT_THROW(client_.fetch_index(repo_.base_url()), FormatError);

    repo_.set_index(R"({"repo_version":"9","entries":[]})");
    EXPECT_THROW(client_.fetch_index(repo_.base_url()), FormatError);
}

TEST_F(RepositoryTest, SecondPullIsCacheHit) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    const fs::path first = client_.pull(index, "toy", cache_.path());
    EXPECT_EQ(first, cache_ / "toy.roofline.json");
    EXPECT_EQ(read_file(first), sample_bytes("toy.roofline.json"));

    const std::size_t before = client_.transfers();
    const PullResult again = client_.pull_entry(index, "toy", cache_.path());
    EXPECT_TRUE(again.from_cache);
    EXPECT_EQ(again.path, first);
    EXPECT_EQ(client_.transfers() - before, 0u);
    EXPECT_EQ(read_file(again.path), sample_bytes("toy.roofline.json"));
}

TEST_F(RepositoryTest, TamperedPayloadIsRejected) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    repo_.tamper("toy", sample_bytes("single-pair.roofline.json"));
    EXPECT_THROW(client_.pull(index, "toy", cache_.path()), IntegrityError);
    EXPECT_TRUE(fs::is_empty(cache_.path()));
}

TEST_F(RepositoryTest, CorruptCacheFileIsReplaced) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    write_file_atomic(cache_ / "toy.roofline.json", "garbage");
    const PullResult r = client_.pull_entry(index, "toy", cache_.path());
    EXPECT_FALSE(r.from_cache);
    EXPECT_EQ(read_file(r.path), sample_bytes("toy.roofline.json"));
}

TEST_F(RepositoryTest, InvalidDatasetWithMatchingHashIsRejected) {
    TempDir other;
    FixtureRepo bad;
    bad.add("ok", sample_bytes("toy.roofline.json"));
    const std::string junk = R"({"schema_version":"1.0"})";
    bad.set_index(nlohmann::json{{"repo_version", "1.0"},
                                 {"entries",
                                  {{{"id", "junk"},
                                    {"url", bad.base_url() + "/data/ok.roofline.json"},
                                    {"sha256", sha256_hex(junk)},
                                    {"machine_name", "x"},
                                    {"created", "2026-01-01T00:00:00Z"}}}}}
                      .dump());
    bad.tamper("ok", junk);
    const RepositoryIndex index = client_.fetch_index(bad.base_url());
    EXPECT_THROW(client_.pull(index, "junk", other.path()), IntegrityError);
    EXPECT_TRUE(fs::is_empty(other.path()));
}

TEST_F(RepositoryTest, UnknownIdIsNotFound) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    EXPECT_THROW(client_.pull(index, "nope", cache_.path()), NotFoundError);
}

TEST_F(RepositoryTest, CachedEntriesSurviveOffline) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    client_.pull(index, "toy", cache_.path());
    client_.pull(index, "cluster", cache_.path());
    repo_.stop();

    EXPECT_THROW(client_.fetch_index(repo_.base_url()), TransportError);
    EXPECT_EQ(client_.pull(index, "toy", cache_.path()), cache_ / "toy.roofline.json");
    EXPECT_EQ(client_.pull(index, "cluster", cache_.path()), cache_ / "cluster.roofline.json");
    load_dataset(read_file(cache_ / "cluster.roofline.json"));
}

TEST_F(RepositoryTest, ConcurrentPullsOfSameId) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    std::vector<std::thread> threads;
    std::vector<fs::path> paths(8);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        threads.emplace_back([&, i] { paths[i] = client_.pull(index, "cluster", cache_.path()); });
    }
    for (auto& t : threads) {
        t.join();
    }
    for (const auto& p : paths) {
        EXPECT_EQ(p, cache_ / "cluster.roofline.json");
    }
    EXPECT_EQ(read_file(paths[0]), sample_bytes("cluster-node.roofline.json"));
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(cache_.path())) {
        ++files;
    }
    EXPECT_EQ(files, 1u);
}

TEST_F(RepositoryTest, SyncReportsPulledThenCached) {
    const SyncReport first = client_.sync(repo_.base_url(), cache_.path());
    EXPECT_EQ(first.pulled, (std::vector<std::string>{"toy", "cluster"}));
    EXPECT_TRUE(first.cached.empty());
    EXPECT_TRUE(first.errors.empty());

    const SyncReport second = client_.sync(repo_.base_url(), cache_.path());
    EXPECT_TRUE(second.pulled.empty());
    EXPECT_EQ(second.cached.size(), 2u);
}

TEST_F(RepositoryTest, SyncIsolatesTamperedEntry) {
    repo_.tamper("cluster", sample_bytes("single-pair.roofline.json"));
    const SyncReport r = client_.sync(repo_.base_url(), cache_.path());
    EXPECT_EQ(r.pulled, (std::vector<std::string>{"toy"}));
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].id, "cluster");
    EXPECT_FALSE(fs::exists(cache_ / "cluster.roofline.json"));
}

TEST_F(RepositoryTest, ListRemote) {
    const RepositoryIndex index = client_.fetch_index(repo_.base_url());
    EXPECT_EQ(list_remote(index, std::nullopt).size(), 2u);
    const auto xeon = list_remote(index, std::string("xeon"));
    ASSERT_EQ(xeon.size(), 1u);
    EXPECT_EQ(xeon[0].id, "cluster");
    EXPECT_TRUE(list_remote(index, std::string("gpu")).empty());
    EXPECT_TRUE(list_remote(index, std::string("xeo")).empty());
}

TEST(RepositoryClient, ConnectionRefusedIsTransportError) {
    const int port = testing::unused_port();
    RepositoryClient client(std::chrono::milliseconds(500));
    EXPECT_THROW(client.fetch_index("http://127.0.0.1:" + std::to_string(port)), TransportError);
}

TEST(ParseUrl, Forms) {
    Url u = parse_url("http://example.org:8080/repo/v1");
    EXPECT_EQ(u.host, "example.org");
    EXPECT_EQ(u.port, 8080);
    EXPECT_EQ(u.path, "/repo/v1");
    u = parse_url("http://example.org");
    EXPECT_EQ(u.port, 80);
    EXPECT_EQ(u.path, "/");
    u = parse_url("http://[::1]:9000/x");
    EXPECT_EQ(u.host, "::1");
    EXPECT_EQ(u.port, 9000);
    EXPECT_THROW(parse_url("example.org/index.json"), FormatError);
    EXPECT_THROW(parse_url("ftp://example.org"), FormatError);
    EXPECT_THROW(parse_url("http://host:99999/"), FormatError);
    EXPECT_THROW(parse_url("http:///path"), FormatError);
}

TEST(DefaultCacheDir, EnvironmentOverride) {
    ::setenv("ROOFLINE_CACHE_DIR", "/tmp/roofline-cache-override", 1);
    EXPECT_EQ(default_cache_dir(), fs::path("/tmp/roofline-cache-override"));
    ::unsetenv("ROOFLINE_CACHE_DIR");
    EXPECT_NE(default_cache_dir(), fs::path("/tmp/roofline-cache-override"));
}

} // namespace
} // namespace roofline
