#include <doctest.h>

#include <snsel/ml.hpp>
#include <snsel/rng.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace snsel;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path(std::string("snsel_io_") + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

LabeledDataset training_data() {
    Rng rng(55);
    LabeledDataset d;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 8; ++i) {
            d.features.push_back({6.0 * k + rng.next_double(),
                                  -3.0 * k + rng.next_double(),
                                  0.4 * k + rng.next_double(0.0, 0.2)});
            d.labels.push_back(k);
        }
    return d;
}

std::vector<FeatureRow> probe_rows() {
    Rng rng(66);
    std::vector<FeatureRow> rows;
    for (int i = 0; i < 25; ++i)
        rows.push_back({rng.next_double(-2.0, 14.0), rng.next_double(-8.0, 2.0),
                        rng.next_double(0.0, 1.0)});
    return rows;
}

} // namespace

TEST_SUITE("ml_io") {

TEST_CASE("every model kind survives a save/load round trip") {
    const LabeledDataset d = training_data();
    const auto probes = probe_rows();
    Hyperparams hp;
    hp.knn_k = 3;
    hp.rf_trees = 25;
    hp.mlp_epochs = 300;
    for (const std::string& kind : model_kinds()) {
        CAPTURE(kind);
        const TrainedModel model = train_model(kind, d, hp, 7);
        TempFile tmp(kind + ".json");
        save_model(model, tmp.path);
        const TrainedModel loaded = load_model(tmp.path);
        CHECK(loaded.kind == kind);
        CHECK(loaded.scaling.has_value() == model.scaling.has_value());
        for (const FeatureRow& probe : probes)
            CHECK(predict_class(loaded, probe) == predict_class(model, probe));
        // Scores, not just argmax, must survive.
        for (const FeatureRow& probe : probes) {
            const auto a = class_scores(model, probe);
            const auto b = class_scores(loaded, probe);
            for (int k = 0; k < kNumClasses; ++k)
                CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("numeric parameters round-trip exactly") {
    const LabeledDataset d = training_data();
    const TrainedModel model = train_model("mlp", d, Hyperparams{}, 3);
    TempFile tmp("exact.json");
    save_model(model, tmp.path);
    const TrainedModel loaded = load_model(tmp.path);
    const auto& a = std::get<MlpParams>(model.params);
    const auto& b = std::get<MlpParams>(loaded.params);
    CHECK(a.w1 == b.w1);
    CHECK(a.b1 == b.b1);
    CHECK(a.w2 == b.w2);
    CHECK(a.b2 == b.b2);
    CHECK(a.seed == b.seed);
    CHECK(model.scaling->mean == loaded.scaling->mean);
    CHECK(model.scaling->sd == loaded.scaling->sd);
}

TEST_CASE("saving a loaded model reproduces the bytes") {
    const LabeledDataset d = training_data();
    Hyperparams hp;
    hp.rf_trees = 10;
    hp.mlp_epochs = 100;
    for (const std::string& kind : model_kinds()) {
        CAPTURE(kind);
        const TrainedModel model = train_model(kind, d, hp, 11);
        TempFile first(kind + "_a.json");
        TempFile second(kind + "_b.json");
        save_model(model, first.path);
        save_model(load_model(first.path), second.path);
        CHECK(slurp(first.path) == slurp(second.path));
    }
}

TEST_CASE("the file format is versioned json with sorted keys") {
    const LabeledDataset d = training_data();
    const TrainedModel model = train_model("knn", d, Hyperparams{}, 0);
    TempFile tmp("format.json");
    save_model(model, tmp.path);
    const std::string text = slurp(tmp.path);
    CHECK(text.find("\"format\":\"snsel-model\"") != std::string::npos);
    CHECK(text.find("\"version\":1") != std::string::npos);
    CHECK(text.find("\"kind\":\"knn\"") != std::string::npos);
    CHECK(text.back() == '\n');
}

TEST_CASE("rf persists without scaling") {
    const LabeledDataset d = training_data();
    Hyperparams hp;
    hp.rf_trees = 5;
    const TrainedModel model = train_model("rf", d, hp, 2);
    REQUIRE_FALSE(model.scaling.has_value());
    TempFile tmp("rf.json");
    save_model(model, tmp.path);
    CHECK(slurp(tmp.path).find("\"scaling\":null") != std::string::npos);
    const TrainedModel loaded = load_model(tmp.path);
    CHECK_FALSE(loaded.scaling.has_value());
    const auto& pa = std::get<RfParams>(model.params);
    const auto& pb = std::get<RfParams>(loaded.params);
    REQUIRE(pa.trees.size() == pb.trees.size());
    for (std::size_t t = 0; t < pa.trees.size(); ++t) {
        REQUIRE(pa.trees[t].nodes.size() == pb.trees[t].nodes.size());
        for (std::size_t i = 0; i < pa.trees[t].nodes.size(); ++i) {
            CHECK(pa.trees[t].nodes[i].feature == pb.trees[t].nodes[i].feature);
            CHECK(pa.trees[t].nodes[i].threshold == pb.trees[t].nodes[i].threshold);
            CHECK(pa.trees[t].nodes[i].counts == pb.trees[t].nodes[i].counts);
        }
    }
}

TEST_CASE("loading a missing file fails") {
    CHECK_THROWS_AS((void)load_model("snsel_io_no_such_file.json"),
                    std::runtime_error);
}

TEST_CASE("loading rejects foreign or damaged files") {
    TempFile tmp("bad.json");

    spit(tmp.path, "{\"format\":\"other\",\"version\":1}\n");
    CHECK_THROWS_AS((void)load_model(tmp.path), std::runtime_error);

    spit(tmp.path, "not json at all");
    CHECK_THROWS_AS((void)load_model(tmp.path), std::runtime_error);

    spit(tmp.path, "{\"format\":\"snsel-model\"");
    CHECK_THROWS_AS((void)load_model(tmp.path), std::runtime_error);

    // Right format, unsupported version.
    const LabeledDataset d = training_data();
    const TrainedModel model = train_model("knn", d, Hyperparams{}, 0);
    TempFile good("good.json");
    save_model(model, good.path);
    std::string text = slurp(good.path);
    const auto pos = text.find("\"version\":1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "\"version\":2");
    spit(tmp.path, text);
    CHECK_THROWS_AS((void)load_model(tmp.path), std::runtime_error);

    // Right envelope, missing parameter block.
    spit(tmp.path,
         "{\"format\":\"snsel-model\",\"kind\":\"knn\",\"scaling\":null,"
         "\"version\":1}\n");
    CHECK_THROWS_AS((void)load_model(tmp.path), std::runtime_error);
}

TEST_CASE("saving to an unwritable path fails") {
    const LabeledDataset d = training_data();
    const TrainedModel model = train_model("knn", d, Hyperparams{}, 0);
    CHECK_THROWS_AS(save_model(model, "no_such_dir/model.json"),
                    std::runtime_error);
}

TEST_CASE("error messages carry the offending path") {
    TempFile tmp("named.json");
    spit(tmp.path, "[1, 2, 3]");
    CHECK_THROWS_WITH_AS((void)load_model(tmp.path),
                         doctest::Contains(tmp.path.c_str()),
                         std::runtime_error);
}

} // TEST_SUITE("ml_io")
