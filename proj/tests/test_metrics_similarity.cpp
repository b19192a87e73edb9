// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>

#include "capgen/metrics/similarity.hpp"

using namespace capgen;

namespace {

// Maps chosen strings to fixed vectors; anything else falls back to a hash
// embedding. Lets tests pin exact geometry.
class FixedEmbedder final : public metrics::Embedder {
public:
    std::map<std::string, std::vector<double>> table;
    std::string id() const override { return "fixed"; }
    std::vector<double> embed(const std::string& text) override {
        auto it = table.find(text);
        if (it != table.end()) return it->second;
        return fallback_.embed(text);
    }

private:
    metrics::HashEmbedder fallback_{4};
};

}  // namespace

TEST_CASE("cosine basics", "[similarity]") {
    std::vector<double> u{1, 0}, v{1, 1}, w{0, 1};
    CHECK(metrics::cosine(u, u) == 1.0);
    CHECK(metrics::cosine(u, w) == 0.0);
    CHECK(metrics::cosine(u, v) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("cosine argument errors", "[similarity]") {
    std::vector<double> u{1, 0}, zero{0, 0}, short_v{1};
    CHECK_THROWS_AS(metrics::cosine(u, zero), std::invalid_argument);
    CHECK_THROWS_AS(metrics::cosine(u, short_v), std::invalid_argument);
    CHECK_THROWS_AS(metrics::cosine(std::vector<double>{}, std::vector<double>{}),
                    std::invalid_argument);
}

TEST_CASE("cosine is symmetric and scale-invariant", "[similarity][property]") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 200; ++iter) {
        int dim = 2 + static_cast<int>(rng() % 8);
        std::vector<double> u(dim), v(dim);
        for (auto& x : u) x = static_cast<double>(rng() % 2001) / 1000.0 - 1.0;
        for (auto& x : v) x = static_cast<double>(rng() % 2001) / 1000.0 - 1.0;
        u[0] += 1.5;  // keep norms safely nonzero
        v[0] += 1.5;
        double base = metrics::cosine(u, v);
        CHECK(metrics::cosine(v, u) == Catch::Approx(base).epsilon(1e-14));
        double a = 0.001 + static_cast<double>(rng() % 1000);
        auto scaled = u;
        for (auto& x : scaled) x *= a;
        CHECK(metrics::cosine(scaled, v) == Catch::Approx(base).epsilon(1e-9));
        CHECK(base >= -1.0 - 1e-12);
        CHECK(base <= 1.0 + 1e-12);
    }
}

TEST_CASE("similarity_scores on pinned geometry", "[similarity]") {
    FixedEmbedder embedder;
    embedder.table["gen"] = {1, 0};
    embedder.table["ref"] = {0, 1};
    embedder.table["src"] = {1, 1};
    auto scores = metrics::similarity_scores("gen", "ref", "src", embedder);
    CHECK(scores.sem_sim == 0.0);
    REQUIRE(scores.norm_defined);
    // cos(gen,src)/cos(ref,src) = (1/sqrt2)/(1/sqrt2)
    CHECK(scores.norm_sem == 1.0);
}

TEST_CASE("orthogonal reference trips the ratio guard", "[similarity]") {
    FixedEmbedder embedder;
    embedder.table["gen"] = {1, 1};
    embedder.table["ref"] = {1, 0};
    embedder.table["src"] = {0, 1};
    auto scores = metrics::similarity_scores("gen", "ref", "src", embedder);
    CHECK_FALSE(scores.norm_defined);
}

TEST_CASE("gen == ref gives sem_sim and norm_sem exactly 1", "[similarity][property]") {
    metrics::HashEmbedder embedder(64);
    std::mt19937_64 rng(17);
    const std::vector<std::string> vocab = {"soap", "dish", "cat",  "रात", "पानी",
                                            "ruwa", "gida", "tree", "sky"};
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<std::string> words;
        int len = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < len; ++i) words.push_back(vocab[rng() % vocab.size()]);
        std::string sentence;
        for (const auto& w : words) sentence += w + " ";
        // source overlaps the caption, as an English source sentence would;
        // disjoint hash support would trip the ratio guard by design
        std::string source = words[rng() % words.size()] + " " + sentence;
        auto scores = metrics::similarity_scores(sentence, sentence, source, embedder);
        CHECK(scores.sem_sim == 1.0);
        REQUIRE(scores.norm_defined);
        CHECK(scores.norm_sem == 1.0);
    }
}

TEST_CASE("hash embedder is deterministic and non-degenerate", "[similarity]") {
    metrics::HashEmbedder a(64), b(64);
    CHECK(a.embed("some text") == b.embed("some text"));
    CHECK(a.embed("some text") != a.embed("other text"));
    double norm = 0;
    for (double x : a.embed("x")) norm += x * x;
    CHECK(norm > 0);
}

TEST_CASE("similarity_scores rejects empty inputs", "[similarity]") {
    metrics::HashEmbedder embedder(8);
    CHECK_THROWS_AS(metrics::similarity_scores("", "b", "c", embedder), std::invalid_argument);
    CHECK_THROWS_AS(metrics::similarity_scores("a", "", "c", embedder), std::invalid_argument);
    CHECK_THROWS_AS(metrics::similarity_scores("a", "b", "", embedder), std::invalid_argument);
}
