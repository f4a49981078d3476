#include "roofline/dataset.hpp"
#include "roofline/errors.hpp"
#include "roofline/store.hpp"

#include "support/test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace roofline {
namespace {

using nlohmann::json;
using testing::load_sample;
using testing::sample;

// Pinned from tests/oracles/fingerprint_oracle.py (Python json + hashlib).
constexpr const char* kToyFingerprint = "be6e32e1627a88280682c075573bb05d81d0ae8835c068729be045c6e40358b0";
constexpr const char* kClusterFingerprint = "d7dfe4423bdb7f20cb35a76f80178ea8f8658646e5325a7e0c69914e10240280";
constexpr const char* kSinglePairFingerprint = "5902f5b4de486cb77ce922f3794bb406794d425db2423d13def8dfc1596243c9";

std::string validation_path(std::string_view bytes) {
    try {
        load_dataset(bytes);
    } catch (const ValidationError& e) {
        return e.path();
    }
    return "<no error>";
}

json toy_json() { return json::parse(read_file(sample("toy.roofline.json"))); }

TEST(LoadDataset, ToySample) {
    const Dataset d = load_sample("toy.roofline.json");
    EXPECT_EQ(d.machine.name, "toy");
    EXPECT_EQ(d.machine.compute_ceilings.size(), 2u);
    EXPECT_EQ(d.machine.bandwidth_ceilings.size(), 2u);
    EXPECT_EQ(d.machine.compute_ceilings[0], (Ceiling{"FMA", CeilingKind::compute, 160.0}));
    EXPECT_EQ(d.machine.bandwidth_ceilings[1], (Ceiling{"DRAM", CeilingKind::bandwidth, 40.0}));
    ASSERT_EQ(d.trials.size(), 1u);
    EXPECT_EQ(d.trials[0].name, "stencil");
    EXPECT_EQ(d.machine.metadata.at("compiler"), "gcc");
    EXPECT_EQ(d.provenance.at("source"), "hand-authored sample");
}

TEST(LoadDataset, EmptyObjectNamesMachine) { EXPECT_EQ(validation_path("{}"), "machine"); }

TEST(LoadDataset, NegativeCeilingNamesPath) {
    json j = toy_json();
    j["machine"]["gflops"][0]["value"] = -1;
    try {
        load_dataset(j.dump());
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.path(), "machine.gflops[0].value");
        EXPECT_NE(std::string(e.what()).find("machine.gflops[0].value: must be > 0"), std::string::npos);
    }
}

TEST(LoadDataset, InvariantViolationsNamePaths) {
    auto path_after = [](auto mutate) {
        json j = toy_json();
        mutate(j);
        return validation_path(j.dump());
    };
    EXPECT_EQ(path_after([](json& j) { j["machine"]["gbytes"] = json::array(); }), "machine.gbytes");
    EXPECT_EQ(path_after([](json& j) { j["machine"]["gbytes"][1]["name"] = "L1"; }), "machine.gbytes[1].name");
    EXPECT_EQ(path_after([](json& j) { j["machine"]["name"] = ""; }), "machine.name");
    EXPECT_EQ(path_after([](json& j) { j["kernels"][0]["ai"] = 0; }), "kernels[0].ai");
    EXPECT_EQ(path_after([](json& j) { j["kernels"][0]["gflops"] = "fast"; }), "kernels[0].gflops");
    EXPECT_EQ(path_after([](json& j) { j["machine"]["metadata"]["n"] = 3; }), "machine.metadata.n");
    EXPECT_EQ(path_after([](json& j) { j["provenance"].erase("created"); }), "provenance.created");
    EXPECT_EQ(path_after([](json& j) { j["provenance"]["created"] = "yesterday"; }), "provenance.created");
    EXPECT_EQ(path_after([](json& j) { j["provenance"].erase("source"); }), "provenance.source");
    EXPECT_EQ(path_after([](json& j) { j.erase("schema_version"); }), "schema_version");
    EXPECT_EQ(path_after([](json& j) { j["machine"]["cores"] = "4"; }), "machine.cores");
    EXPECT_EQ(validation_path("[1,2]"), "(root)");
}

TEST(LoadDataset, MalformedJsonReportsByteOffset) {
    const std::string bytes = read_file(sample("toy.roofline.json"));
    try {
        load_dataset(bytes.substr(0, 40));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.byte_offset(), 41u);
        EXPECT_NE(std::string(e.what()).find("byte 41"), std::string::npos);
    }
}

TEST(LoadDataset, UnsupportedVersion) {
    json j = toy_json();
    j["schema_version"] = "2.0";
    EXPECT_THROW(load_dataset(j.dump()), VersionError);
}

TEST(SaveDataset, RoundTripToySample) {
    const Dataset d = load_sample("toy.roofline.json");
    const std::string bytes = save_dataset(d);
    EXPECT_EQ(load_dataset(bytes), d);
    EXPECT_EQ(save_dataset(load_dataset(bytes)), bytes);
}

TEST(SaveDataset, CanonicalForm) {
    const std::string bytes = save_dataset(load_sample("single-pair.roofline.json"));
    EXPECT_EQ(bytes,
              R"({"kernels":[],"machine":{"gbytes":[{"name":"DRAM","value":64.0}],"gflops":[{"name":"Peak","value":64.0}],)"
              R"("metadata":{},"name":"single-pair"},"provenance":{"created":"2026-01-15T12:00:00Z",)"
              R"("source":"hand-authored sample"},"schema_version":"1.0"})");
}

TEST(SaveDataset, KeyOrderDoesNotMatter) {
    const std::string reordered = R"({
      "provenance": {"source": "hand-authored sample", "created": "2026-01-15T12:00:00Z"},
      "kernels": [{"metadata": {"variant": "baseline"}, "gflops": 40, "ai": 2, "name": "stencil"}],
      "machine": {
        "gbytes": [{"value": 320, "name": "L1"}, {"value": 40, "name": "DRAM"}],
        "gflops": [{"value": 160, "name": "FMA"}, {"value": 80, "name": "NoFMA"}],
        "metadata": {"nodes": "1", "compiler": "gcc"},
        "name": "toy"
      },
      "schema_version": "1.0"
    })";
    EXPECT_EQ(save_dataset(load_dataset(reordered)), save_dataset(load_sample("toy.roofline.json")));
}

TEST(SaveDataset, TrialOrderPreserved) {
    Dataset d = load_sample("toy.roofline.json");
    d.trials.insert(d.trials.begin(), KernelTrial{"zzz", 1.0, 1.0, {}});
    d.trials.push_back(KernelTrial{"aaa", 1.0, 1.0, {}});
    const Dataset back = load_dataset(save_dataset(d));
    ASSERT_EQ(back.trials.size(), 3u);
    EXPECT_EQ(back.trials[0].name, "zzz");
    EXPECT_EQ(back.trials[1].name, "stencil");
    EXPECT_EQ(back.trials[2].name, "aaa");
}

TEST(SaveDataset, UnknownTopLevelKeysPreserved) {
    const Dataset d = load_sample("cluster-node.roofline.json");
    ASSERT_TRUE(d.extra.contains("notes"));
    const std::string bytes = save_dataset(d);
    EXPECT_NE(bytes.find(R"("notes":"values are illustrative, not measurements")"), std::string::npos);
    EXPECT_EQ(load_dataset(bytes), d);
}

TEST(Fingerprint, GoldenValuesFromIndependentOracle) {
    EXPECT_EQ(load_sample("toy.roofline.json").fingerprint, kToyFingerprint);
    EXPECT_EQ(load_sample("cluster-node.roofline.json").fingerprint, kClusterFingerprint);
    EXPECT_EQ(load_sample("single-pair.roofline.json").fingerprint, kSinglePairFingerprint);
}

TEST(Fingerprint, IgnoresProvenanceTrialsAndMetadata) {
    Dataset d = load_sample("toy.roofline.json");
    d.provenance["created"] = "2030-01-01T00:00:00Z";
    d.provenance["site"] = "elsewhere";
    d.trials.push_back({"extra", 3.0, 9.0, {}});
    d.machine.metadata["compiler"] = "clang";
    EXPECT_EQ(fingerprint(d), kToyFingerprint);
}

TEST(Fingerprint, SensitiveToMachineContent) {
    const Dataset base = load_sample("toy.roofline.json");

    Dataset ulp = base;
    ulp.machine.bandwidth_ceilings[1].value = std::nextafter(40.0, 100.0);
    EXPECT_NE(fingerprint(ulp), kToyFingerprint);

    Dataset renamed = base;
    renamed.machine.name = "toy2";
    EXPECT_NE(fingerprint(renamed), kToyFingerprint);

    Dataset ceiling_renamed = base;
    ceiling_renamed.machine.compute_ceilings[0].name = "fma";
    EXPECT_NE(fingerprint(ceiling_renamed), kToyFingerprint);
}

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(FindDuplicates, Examples) {
    const Dataset toy = load_sample("toy.roofline.json");
    const Dataset cluster = load_sample("cluster-node.roofline.json");
    EXPECT_TRUE(find_duplicates(toy, {}).empty());

    std::vector<StoredDataset> store{{"a1", toy}};
    EXPECT_EQ(find_duplicates(toy, store), (std::vector<std::string>{"a1"}));
    EXPECT_TRUE(find_duplicates(cluster, store).empty());
}

TEST(Search, Examples) {
    Dataset mira = load_sample("single-pair.roofline.json");
    mira.machine.name = "Mira-BGQ";
    std::vector<StoredDataset> store{{"t", load_sample("toy.roofline.json")},
                                     {"c", load_sample("cluster-node.roofline.json")},
                                     {"m", mira}};

    EXPECT_EQ(roofline::search(store, {{"compiler", "gcc"}}, std::nullopt), (std::vector<std::string>{"t"}));
    EXPECT_EQ(roofline::search(store, {}, std::nullopt), (std::vector<std::string>{"t", "c", "m"}));
    EXPECT_EQ(roofline::search(store, {}, std::string("")), (std::vector<std::string>{"t", "c", "m"}));
    EXPECT_EQ(roofline::search(store, {}, std::string("mira")), (std::vector<std::string>{"m"}));
    EXPECT_EQ(roofline::search(store, {{"campaign", "example"}}, std::nullopt), (std::vector<std::string>{"c"}));
    EXPECT_TRUE(roofline::search(store, {{"compiler", "gcc"}, {"isa", "avx2"}}, std::nullopt).empty());
    EXPECT_EQ(roofline::search(store, {{"compiler", "icc"}, {"isa", "avx2"}}, std::string("NODE")),
              (std::vector<std::string>{"c"}));
}

// Random valid datasets survive load(save(d)) and canonicalize idempotently.
TEST(SaveDatasetProperty, RandomRoundTrip) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> e(-20, 20);
    std::uniform_int_distribution<int> n(1, 5);
    auto text = [&](const std::string& prefix) { return prefix + std::to_string(rng() % 1000); };
    for (int iter = 0; iter < 100; ++iter) {
        Dataset d;
        d.machine.name = text("machine-é-");
        for (int i = 0, k = n(rng); i < k; ++i) {
            d.machine.compute_ceilings.push_back({"c" + std::to_string(i), CeilingKind::compute, std::exp2(e(rng))});
        }
        for (int i = 0, k = n(rng); i < k; ++i) {
            d.machine.bandwidth_ceilings.push_back({"b" + std::to_string(i), CeilingKind::bandwidth, std::exp2(e(rng))});
        }
        for (int i = 0, k = n(rng) - 1; i < k; ++i) {
            d.trials.push_back({text("kern\"el"), std::exp2(e(rng)), std::exp2(e(rng)), {{text("k"), text("v\n")}}});
        }
        d.machine.metadata[text("key")] = text("value");
        d.provenance = {{"created", "2026-03-04T05:06:07.123Z"}, {"source", text("src")}};
        if (iter % 3 == 0) {
            d.extra["x-ext"] = {{"nested", {1, 2.5, "three"}}};
        }
        d.fingerprint = fingerprint(d);

        const std::string once = save_dataset(d);
        const Dataset back = load_dataset(once);
        ASSERT_EQ(back, d) << once;
        EXPECT_EQ(save_dataset(back), once);
    }
}

TEST(DatasetStore, PutListGet) {
    testing::TempDir dir;
    DatasetStore store(dir.path());
    EXPECT_TRUE(store.list().empty());

    const Dataset toy = load_sample("toy.roofline.json");
    const auto first = store.put(toy);
    EXPECT_EQ(first.id.size(), 8u);
    EXPECT_TRUE(first.duplicates.empty());
    const auto second = store.put(toy);
    EXPECT_EQ(second.duplicates, (std::vector<std::string>{first.id}));

    const auto all = store.list();
    ASSERT_EQ(all.size(), 2u);
    EXPECT_LT(all[0].id, all[1].id);
    ASSERT_TRUE(store.get(first.id).has_value());
    EXPECT_EQ(store.get(first.id)->dataset, toy);
    EXPECT_FALSE(store.get("../etc/passwd").has_value());
    EXPECT_FALSE(store.get("missing").has_value());

    // Stray and temp files are ignored.
    write_file_atomic(dir / "notes.txt", "hello");
    write_file_atomic(dir / "broken.roofline.json", "{");
    EXPECT_EQ(store.list().size(), 2u);
}

TEST(DatasetStore, IdValidation) {
    EXPECT_TRUE(is_valid_dataset_id("a1b2c3d4"));
    EXPECT_TRUE(is_valid_dataset_id("mira_bgq-2"));
    EXPECT_FALSE(is_valid_dataset_id(""));
    EXPECT_FALSE(is_valid_dataset_id(".."));
    EXPECT_FALSE(is_valid_dataset_id("a/b"));
    EXPECT_FALSE(is_valid_dataset_id("a.b"));
}

} // namespace
} // namespace roofline
