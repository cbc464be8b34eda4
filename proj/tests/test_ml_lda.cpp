#include <doctest.h>

#include <snsel/ml.hpp>
#include <snsel/rng.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace snsel;

namespace {

double gauss(Rng& rng) {
    const double u1 = 1.0 - rng.next_double(); // (0, 1]: keeps log finite
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

LabeledDataset gaussian_blobs(std::uint64_t seed, int per_class) {
    const std::array<FeatureRow, 3> centers{
        FeatureRow{0.0, 0.0, 0.0},
        FeatureRow{6.0, -4.0, 3.0},
        FeatureRow{-5.0, 5.0, -6.0},
    };
    Rng rng(seed);
    LabeledDataset d;
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < per_class; ++i) {
            FeatureRow row;
            for (int j = 0; j < kNumFeatures; ++j)
                row[j] = centers[k][j] + gauss(rng);
            d.features.push_back(row);
            d.labels.push_back(k);
        }
    }
    return d;
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

// Oracle pieces, written independently of the production code: explicit
// z-score, explicit pooled covariance, and a Cramer's-rule inverse (a
// different algorithm from the production Gauss-Jordan).
struct ZScore {
    std::array<double, 3> mean{};
    std::array<double, 3> sd{};
};

ZScore fit_zscore(const std::vector<FeatureRow>& rows) {
    ZScore z;
    const double n = static_cast<double>(rows.size());
    for (int j = 0; j < 3; ++j) {
        for (const auto& r : rows) z.mean[j] += r[j];
        z.mean[j] /= n;
        double sq = 0.0;
        for (const auto& r : rows) sq += (r[j] - z.mean[j]) * (r[j] - z.mean[j]);
        z.sd[j] = std::sqrt(sq / n);
        if (z.sd[j] == 0.0) z.sd[j] = 1.0;
    }
    return z;
}

FeatureRow zapply(const ZScore& z, const FeatureRow& r) {
    return {(r[0] - z.mean[0]) / z.sd[0], (r[1] - z.mean[1]) / z.sd[1],
            (r[2] - z.mean[2]) / z.sd[2]};
}

Matrix3 cramer_inverse(const Matrix3& m) {
    const double det =
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    REQUIRE(std::abs(det) > 0.0);
    Matrix3 inv;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

struct OracleLda {
    ZScore z;
    std::array<FeatureRow, 3> means{};
    std::array<double, 3> priors{};
    Matrix3 inv_cov{};

    static OracleLda fit(const LabeledDataset& raw, double ridge) {
        OracleLda o;
        o.z = fit_zscore(raw.features);
        std::vector<FeatureRow> scaled;
        scaled.reserve(raw.size());
        for (const auto& r : raw.features) scaled.push_back(zapply(o.z, r));

        std::array<int, 3> counts{};
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const int k = raw.labels[i];
            ++counts[k];
            for (int j = 0; j < 3; ++j) o.means[k][j] += scaled[i][j];
        }
        int present = 0;
        for (int k = 0; k < 3; ++k) {
            if (counts[k] == 0) continue;
            ++present;
            for (int j = 0; j < 3; ++j) o.means[k][j] /= counts[k];
        }
        Matrix3 cov{};
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const auto& mean = o.means[raw.labels[i]];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    cov[a][b] += (scaled[i][a] - mean[a]) * (scaled[i][b] - mean[b]);
        }
        const double denom = static_cast<double>(raw.size()) - present;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) cov[a][b] /= denom;
            cov[a][a] += ridge;
        }
        o.inv_cov = cramer_inverse(cov);
        for (int k = 0; k < 3; ++k)
            o.priors[k] = static_cast<double>(counts[k]) /
                          static_cast<double>(raw.size());
        return o;
    }

    std::array<double, 3> scores(const FeatureRow& raw_row) const {
        const FeatureRow x = zapply(z, raw_row);
        std::array<double, 3> out{};
        for (int k = 0; k < 3; ++k) {
            FeatureRow sim{};
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) sim[a] += inv_cov[a][b] * means[k][b];
            double s = std::log(priors[k]);
            for (int a = 0; a < 3; ++a)
                s += x[a] * sim[a] - 0.5 * means[k][a] * sim[a];
            out[k] = s;
        }
        return out;
    }

    int predict(const FeatureRow& raw_row) const {
        const auto s = scores(raw_row);
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (s[k] > s[best]) best = k;
        return best;
    }
};

} // namespace

TEST_SUITE("ml_lda") {

TEST_CASE("separable gaussian blobs are classified almost perfectly") {
    const LabeledDataset d = gaussian_blobs(11, 50);
    const TrainedModel model = train_lda(d);
    int correct = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (predict_lda(model, d.features[i]).first == d.labels[i]) ++correct;
    CHECK(correct >= 149); // 150 points, centers many sigma apart
}

TEST_CASE("fit and discriminants match an independent implementation") {
    const LabeledDataset d = gaussian_blobs(23, 40);
    const double ridge = 1e-8;
    const TrainedModel model = train_lda(d, ridge);
    const OracleLda oracle = OracleLda::fit(d, ridge);

    const auto& params = std::get<LdaParams>(model.params);
    for (int k = 0; k < 3; ++k) {
        CHECK(params.priors[k] == doctest::Approx(oracle.priors[k]).epsilon(1e-14));
        for (int j = 0; j < 3; ++j)
            CHECK(params.class_means[k][j] ==
                  doctest::Approx(oracle.means[k][j]).epsilon(1e-12));
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(params.inv_cov[a][b] ==
                  doctest::Approx(oracle.inv_cov[a][b]).epsilon(1e-9));

    // Every training point: same winner, same discriminant values.
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto got = predict_lda(model, d.features[i]);
        const auto want_scores = oracle.scores(d.features[i]);
        CHECK(got.first == oracle.predict(d.features[i]));
        for (int k = 0; k < 3; ++k)
            CHECK(got.second[k] ==
                  doctest::Approx(want_scores[k]).epsilon(1e-8));
    }
}

TEST_CASE("pooled covariance is symmetric and its inverse checks out") {
    const LabeledDataset d = gaussian_blobs(7, 30);
    const auto& params = std::get<LdaParams>(train_lda(d).params);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(params.pooled_cov[a][b] == params.pooled_cov[b][a]);
    // pooled_cov * inv_cov == identity
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            double dot = 0.0;
            for (int m = 0; m < 3; ++m)
                dot += params.pooled_cov[a][m] * params.inv_cov[m][b];
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-9));
        }
    }
    double prior_sum = 0.0;
    for (double p : params.priors) prior_sum += p;
    CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two tight clusters with two classes") {
    LabeledDataset d;
    d.features = {{0.0, 0.0, 0.0}, {0.1, 0.0, 0.0}, {5.0, 5.0, 5.0},
                  {5.1, 5.0, 5.0}};
    d.labels = {0, 0, 1, 1};
    const TrainedModel model = train_lda(d);
    CHECK(predict_lda(model, {0.05, 0.0, 0.0}).first == 0);
    CHECK(predict_lda(model, {5.05, 5.0, 5.0}).first == 1);
    // The absent class never wins.
    CHECK(predict_lda(model, {2.5, 2.5, 2.5}).first != 2);
}

TEST_CASE("zero ridge with a duplicated column is singular") {
    Rng rng(5);
    LabeledDataset d;
    for (int i = 0; i < 20; ++i) {
        const double a = rng.next_double(-1.0, 1.0);
        const double b = rng.next_double(-1.0, 1.0);
        d.features.push_back({a, a, b}); // columns 0 and 1 identical
        d.labels.push_back(i % 2);
    }
    CHECK_THROWS_AS((void)train_lda(d, 0.0), std::runtime_error);
    // The default ridge regularizes the same data into a usable model.
    CHECK_NOTHROW((void)train_lda(d));
}

TEST_CASE("rejects too-few samples and single-class data") {
    LabeledDataset tiny;
    tiny.features = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
    tiny.labels = {0, 1, 2};
    CHECK_THROWS_AS((void)train_lda(tiny), std::invalid_argument);

    LabeledDataset mono;
    for (int i = 0; i < 8; ++i) {
        mono.features.push_back({1.0 * i, 0.0, 0.0});
        mono.labels.push_back(1);
    }
    CHECK_THROWS_AS((void)train_lda(mono), std::invalid_argument);
}

} // TEST_SUITE("ml_lda")
