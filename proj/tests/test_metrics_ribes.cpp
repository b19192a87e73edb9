// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "capgen/metrics/ribes.hpp"

using namespace capgen;
using metrics::Tokens;

namespace {

Tokens toks(std::initializer_list<const char*> words) {
    Tokens t;
    for (auto w : words) t.emplace_back(w);
    return t;
}

// Pair-counting oracle over an aligned rank list. With no ties, Kendall's
// tau rescaled to [0,1] reduces to concordant/total; both forms returned.
struct OracleNkt {
    double rescaled_exact;   // concordant / (concordant + discordant)
    double rescaled_formula; // ((c - d)/t + 1) / 2 — same value up to rounding
};

OracleNkt oracle_nkt(const std::vector<int>& ranks) {
    long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i)
        for (std::size_t j = i + 1; j < ranks.size(); ++j) {
            if (ranks[i] < ranks[j]) ++concordant;
            else if (ranks[i] > ranks[j]) ++discordant;
        }
    double total = static_cast<double>(concordant + discordant);
    double tau = (concordant - discordant) / total;
    return {static_cast<double>(concordant) / total, (tau + 1.0) / 2.0};
}

}  // namespace

TEST_CASE("identical sentences score exactly 1", "[ribes]") {
    for (auto h : {toks({"a"}), toks({"a", "b", "c"}), toks({"a", "a"}), toks({"a", "a", "a"}),
                   toks({"x", "y", "x", "y"}), toks({"the", "cat", "the", "cat"})}) {
        auto score = metrics::ribes(h, h);
        INFO("length " << h.size());
        CHECK(score.score == 1.0);
        CHECK(score.nkt == 1.0);
        CHECK(score.unigram_precision == 1.0);
        CHECK(score.bp == 1.0);
    }
}

TEST_CASE("worked example: full reversal", "[ribes]") {
    auto score = metrics::ribes(toks({"b", "a"}), toks({"a", "b"}));
    CHECK(score.nkt == 0.0);
    CHECK(score.score == 0.0);
    CHECK(score.bp == 1.0);
}

TEST_CASE("worked example: one transposition in three", "[ribes]") {
    auto score = metrics::ribes(toks({"a", "c", "b"}), toks({"a", "b", "c"}));
    CHECK(score.nkt == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(score.unigram_precision == 1.0);
    CHECK(score.bp == 1.0);
    CHECK(score.score == Catch::Approx(0.6667).margin(1e-4));
}

TEST_CASE("brevity penalty and precision compose the score", "[ribes]") {
    // hyp longer than ref: extra word unaligned, bp = 1
    auto score = metrics::ribes(toks({"a", "b", "z"}), toks({"a", "b"}));
    CHECK(score.bp == 1.0);
    CHECK(score.unigram_precision == Catch::Approx(2.0 / 3.0));
    CHECK(score.nkt == 1.0);
    CHECK(score.score ==
          Catch::Approx(std::pow(2.0 / 3.0, 0.25)).epsilon(1e-12));

    // hyp shorter than ref: bp = exp(1 - r/c)
    auto brief = metrics::ribes(toks({"a", "b"}), toks({"a", "b", "c", "d"}));
    CHECK(brief.bp == Catch::Approx(std::exp(1.0 - 2.0)).epsilon(1e-12));
}

TEST_CASE("single aligned word needs a single-word reference", "[ribes]") {
    // one aligned word, longer reference: no rank order exists -> 0
    CHECK(metrics::ribes(toks({"a", "x"}), toks({"a", "b"})).score == 0.0);
    // single-word reference fully matched: perfect order by convention
    auto score = metrics::ribes(toks({"a", "x"}), toks({"a"}));
    CHECK(score.nkt == 1.0);
    CHECK(score.unigram_precision == 0.5);
    // no overlap at all
    CHECK(metrics::ribes(toks({"p", "q"}), toks({"a", "b"})).score == 0.0);
}

TEST_CASE("empty inputs are argument errors", "[ribes]") {
    CHECK_THROWS_AS(metrics::ribes({}, toks({"a"})), std::invalid_argument);
    CHECK_THROWS_AS(metrics::ribes(toks({"a"}), {}), std::invalid_argument);
}

TEST_CASE("NKT equals the pair-counting oracle on unique alignments", "[ribes][property]") {
    std::mt19937_64 rng(11);
    int checked = 0;
    while (checked < 500) {
        // distinct tokens guarantee unique alignment
        int n = 2 + static_cast<int>(rng() % 8);
        Tokens ref;
        for (int i = 0; i < n; ++i) ref.push_back("w" + std::to_string(i));
        Tokens hyp = ref;
        std::shuffle(hyp.begin(), hyp.end(), rng);
        if (rng() % 3 == 0) hyp.resize(2 + rng() % (hyp.size() - 1));

        auto aligned = metrics::ribes_alignment(hyp, ref);
        if (aligned.size() < 2) continue;
        auto score = metrics::ribes(hyp, ref);
        auto oracle = oracle_nkt(aligned);
        CHECK(score.nkt == oracle.rescaled_exact);
        CHECK(score.nkt == Catch::Approx(oracle.rescaled_formula).margin(1e-12));
        ++checked;
    }
}

TEST_CASE("scores stay within [0,1]", "[ribes][property]") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 500; ++iter) {
        Tokens hyp(1 + rng() % 20), ref(1 + rng() % 20);
        for (auto& t : hyp) t = "w" + std::to_string(rng() % 50);
        for (auto& t : ref) t = "w" + std::to_string(rng() % 50);
        auto score = metrics::ribes(hyp, ref);
        CHECK(score.score >= 0.0);
        CHECK(score.score <= 1.0);
        CHECK(score.nkt >= 0.0);
        CHECK(score.nkt <= 1.0);
        CHECK(score.unigram_precision >= 0.0);
        CHECK(score.unigram_precision <= 1.0);
        CHECK(score.bp > 0.0);
        CHECK(score.bp <= 1.0);
    }
}

TEST_CASE("alignment resolves repeats through context", "[ribes]") {
    // "the cat" twice: every occurrence disambiguated by its neighbors
    auto aligned = metrics::ribes_alignment(toks({"the", "cat", "the", "cat"}),
                                            toks({"the", "cat", "the", "cat"}));
    CHECK(aligned == std::vector<int>{0, 1, 2, 3});

    // swapped halves still align one-to-one
    auto swapped = metrics::ribes_alignment(toks({"c", "d", "a", "b"}),
                                            toks({"a", "b", "c", "d"}));
    CHECK(swapped == std::vector<int>{2, 3, 0, 1});
}
