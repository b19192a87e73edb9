// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <random>

#include "capgen/corpus.hpp"

using namespace capgen;
using corpus::LanguageTag;
using corpus::SplitTag;

static const char* kTwoLineTsv =
    "img1\t10\t20\t50\t40\tsoap is in the dish\tसाबुन पकवान में है\n"
    "img2\t0\t0\t30\t30\ta red car\tएक लाल कार\n";

TEST_CASE("parse_corpus reads records in order with raw captions", "[corpus]") {
    auto records = corpus::parse_corpus_text(kTwoLineTsv, LanguageTag::hi, SplitTag::train);
    REQUIRE(records.size() == 2);
    CHECK(records[0].image_id == "img1");
    CHECK(records[0].region.x == 10);
    CHECK(records[0].region.y == 20);
    CHECK(records[0].region.width == 50);
    CHECK(records[0].region.height == 40);
    CHECK(records[0].english_caption == "soap is in the dish");
    REQUIRE(records[0].target_caption.has_value());
    CHECK(*records[0].target_caption == "साबुन पकवान में है");
    CHECK(records[0].language == LanguageTag::hi);
    CHECK(records[0].split == SplitTag::train);
    CHECK(records[1].image_id == "img2");
}

TEST_CASE("parse_corpus edge cases", "[corpus]") {
    CHECK(corpus::parse_corpus_text("", LanguageTag::hi, SplitTag::train).empty());

    SECTION("wrong field count names the line") {
        const char* bad = "img1\t1\t2\t3\t4\tcap\tt\nimg2\t1\t2\t3\n";
        try {
            corpus::parse_corpus_text(bad, LanguageTag::hi, SplitTag::train);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SECTION("non-integer geometry rejected past the header") {
        const char* bad = "img1\t1\t2\t3\t4\tcap\tt\nimg2\tx\t2\t3\t4\tcap\tt\n";
        CHECK_THROWS_AS(corpus::parse_corpus_text(bad, LanguageTag::hi, SplitTag::train),
                        ParseError);
    }
    SECTION("header line auto-detected") {
        std::string with_header =
            "image_id\tx\ty\twidth\theight\tenglish\ttarget\n" + std::string(kTwoLineTsv);
        auto records =
            corpus::parse_corpus_text(with_header, LanguageTag::hi, SplitTag::train);
        CHECK(records.size() == 2);
    }
    SECTION("empty english caption is a record-level error") {
        const char* bad = "img1\t1\t2\t3\t4\t \ttarget\n";
        CHECK_THROWS_AS(corpus::parse_corpus_text(bad, LanguageTag::hi, SplitTag::train),
                        ParseError);
    }
    SECTION("six columns means no target") {
        auto records = corpus::parse_corpus_text("img1\t1\t2\t3\t4\tcap\n", LanguageTag::ha,
                                                 SplitTag::etest);
        REQUIRE(records.size() == 1);
        CHECK_FALSE(records[0].target_caption.has_value());
    }
    SECTION("zero-size region rejected") {
        CHECK_THROWS_AS(corpus::parse_corpus_text("img1\t1\t2\t0\t4\tcap\tt\n", LanguageTag::hi,
                                                  SplitTag::train),
                        ParseError);
    }
}

TEST_CASE("corpus round-trips through serialize", "[corpus][property]") {
    std::mt19937_64 rng(99);
    const std::vector<std::string> caps = {"soap is in the dish", "a cat", "two people walking",
                                           "पानी में नाव", "mutum yana tafiya"};
    std::vector<corpus::RegionRecord> records;
    for (int i = 0; i < 40; ++i) {
        corpus::RegionRecord rec;
        rec.image_id = "img" + std::to_string(rng() % 1000);
        rec.region = {static_cast<int>(rng() % 500), static_cast<int>(rng() % 500),
                      1 + static_cast<int>(rng() % 300), 1 + static_cast<int>(rng() % 300),
                      corpus::RegionOrigin::bottom_left};
        rec.english_caption = caps[rng() % caps.size()];
        if (rng() % 3) rec.target_caption = caps[rng() % caps.size()];
        rec.language = LanguageTag::hi;
        rec.split = SplitTag::train;
        records.push_back(rec);
    }
    auto text = corpus::serialize_corpus(records);
    auto reparsed = corpus::parse_corpus_text(text, LanguageTag::hi, SplitTag::train);
    CHECK(reparsed == records);
    CHECK(corpus::serialize_corpus(reparsed) == text);
}

TEST_CASE("compute_stats sums tokens and counts sentences", "[corpus]") {
    auto records = corpus::parse_corpus_text(kTwoLineTsv, LanguageTag::hi, SplitTag::train);
    auto stats = corpus::compute_stats(records);
    const auto& row = stats.at(SplitTag::train, LanguageTag::hi);
    CHECK(row.sentence_count == 2);
    CHECK(row.english_tokens == 5 + 3);
    CHECK(row.target_tokens == 4 + 3);
    CHECK(row.missing_target == 0);

    SECTION("empty input gives all zeros") {
        auto empty = corpus::compute_stats({});
        CHECK(empty.rows.empty());
    }
    SECTION("permutation invariant") {
        auto reversed = records;
        std::reverse(reversed.begin(), reversed.end());
        auto stats2 = corpus::compute_stats(reversed);
        CHECK(stats2.at(SplitTag::train, LanguageTag::hi).english_tokens == row.english_tokens);
        CHECK(stats2.at(SplitTag::train, LanguageTag::hi).sentence_count == row.sentence_count);
    }
    SECTION("missing target column reported") {
        auto no_target = corpus::parse_corpus_text("img\t1\t1\t2\t2\tone two three\n",
                                                   LanguageTag::ha, SplitTag::etest);
        auto s = corpus::compute_stats(no_target);
        CHECK(s.at(SplitTag::etest, LanguageTag::ha).target_tokens == 0);
        CHECK(s.at(SplitTag::etest, LanguageTag::ha).missing_target == 1);
    }
}

// Official-corpus check; needs the dataset locally, skipped otherwise.
TEST_CASE("official hi train split statistics", "[corpus][!mayfail]") {
    const char* path = std::getenv("CAPGEN_HI_TRAIN_TSV");
    if (!path) {
        SUCCEED("CAPGEN_HI_TRAIN_TSV not set; skipping");
        return;
    }
    auto records = corpus::parse_corpus(path, LanguageTag::hi, SplitTag::train);
    auto stats = corpus::compute_stats(records);
    const auto& row = stats.at(SplitTag::train, LanguageTag::hi);
    CHECK(row.sentence_count == 28930);
    CHECK(row.english_tokens == 143164);
    CHECK(row.target_tokens == 145448);
}

TEST_CASE("language and split tags", "[corpus]") {
    CHECK(corpus::require_language("hi") == LanguageTag::hi);
    CHECK_THROWS_AS(corpus::require_language("xx"), ConfigError);
    CHECK(corpus::parse_split("challenge") == SplitTag::ctest);
    CHECK(corpus::language_name(LanguageTag::ml) == "Malayalam");
}
