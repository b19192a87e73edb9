// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Visual-Genome-style parallel caption corpus: TSV ingestion, record types,
// and per-split token statistics.
//
// Row layout: image_id <TAB> x <TAB> y <TAB> width <TAB> height <TAB>
// english_caption [<TAB> target_caption]. A header line is auto-detected.
// Fields are never quoted; captions must not contain tabs or newlines.
#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "capgen/errors.hpp"
#include "capgen/text.hpp"

namespace capgen::corpus {

enum class LanguageTag { hi, bn, ml, ha };
enum class SplitTag { train, dtest, etest, ctest };
enum class RegionOrigin { bottom_left, top_left };

inline constexpr std::array<LanguageTag, 4> kAllLanguages = {
    LanguageTag::hi, LanguageTag::bn, LanguageTag::ml, LanguageTag::ha};

inline std::string to_string(LanguageTag lang) {
    switch (lang) {
        case LanguageTag::hi: return "hi";
        case LanguageTag::bn: return "bn";
        case LanguageTag::ml: return "ml";
        case LanguageTag::ha: return "ha";
    }
    return "?";
}

inline std::string language_name(LanguageTag lang) {
    switch (lang) {
        case LanguageTag::hi: return "Hindi";
        case LanguageTag::bn: return "Bengali";
        case LanguageTag::ml: return "Malayalam";
        case LanguageTag::ha: return "Hausa";
    }
    return "?";
}

inline std::optional<LanguageTag> parse_language(std::string_view tag) {
    if (tag == "hi") return LanguageTag::hi;
    if (tag == "bn") return LanguageTag::bn;
    if (tag == "ml") return LanguageTag::ml;
    if (tag == "ha") return LanguageTag::ha;
    return std::nullopt;
}

inline LanguageTag require_language(std::string_view tag) {
    auto lang = parse_language(tag);
    if (!lang) throw ConfigError("unsupported language tag: " + std::string(tag));
    return *lang;
}

inline std::string to_string(SplitTag split) {
    switch (split) {
        case SplitTag::train: return "train";
        case SplitTag::dtest: return "dtest";
        case SplitTag::etest: return "etest";
        case SplitTag::ctest: return "ctest";
    }
    return "?";
}

inline std::optional<SplitTag> parse_split(std::string_view tag) {
    if (tag == "train") return SplitTag::train;
    if (tag == "dtest" || tag == "dev") return SplitTag::dtest;
    if (tag == "etest" || tag == "eval") return SplitTag::etest;
    if (tag == "ctest" || tag == "challenge") return SplitTag::ctest;
    return std::nullopt;
}

inline SplitTag require_split(std::string_view tag) {
    auto split = parse_split(tag);
    if (!split) throw ConfigError("unknown split tag: " + std::string(tag));
    return *split;
}

/// Rectangular caption region in image pixels. The origin is always
/// explicit; dataset releases disagree about it.
struct Region {
    int x = 0;
    int y = 0;
    int width = 1;
    int height = 1;
    RegionOrigin origin = RegionOrigin::bottom_left;

    std::string key() const {
        return std::to_string(x) + "_" + std::to_string(y) + "_" +
               std::to_string(width) + "_" + std::to_string(height);
    }
    bool operator==(const Region&) const = default;
};

struct RegionRecord {
    std::string image_id;
    Region region;
    std::string english_caption;                 // raw, unpreprocessed
    std::optional<std::string> target_caption;   // raw; absent on inference-only splits
    LanguageTag language = LanguageTag::hi;
    SplitTag split = SplitTag::train;

    std::string artifact_key() const { return image_id + "_" + region.key(); }
    bool operator==(const RegionRecord&) const = default;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

inline std::optional<int> parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

struct ParseOptions {
    RegionOrigin origin = RegionOrigin::bottom_left;
};

/// Parses TSV text. Order preserved; captions kept raw. Throws ParseError
/// with a 1-based line number on malformed rows.
inline std::vector<RegionRecord> parse_corpus_text(std::string_view content, LanguageTag language,
                                                   SplitTag split, const ParseOptions& opts = {}) {
    std::vector<RegionRecord> records;
    std::size_t pos = 0;
    long line_no = 0;
    bool first_data_line = true;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string_view line = content.substr(
            pos, eol == std::string_view::npos ? content.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? content.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (eol == std::string_view::npos) break;
            continue;
        }

        auto fields = detail::split_fields(line);
        if (fields.size() != 6 && fields.size() != 7)
            throw ParseError("expected 6 or 7 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);

        auto x = detail::parse_int(fields[1]);
        auto y = detail::parse_int(fields[2]);
        auto w = detail::parse_int(fields[3]);
        auto h = detail::parse_int(fields[4]);
        if (!x || !y || !w || !h) {
            // A leading header row is legal; geometry fields parse as text there.
            if (first_data_line) {
                first_data_line = false;
                continue;
            }
            throw ParseError("non-integer region geometry", line_no);
        }
        first_data_line = false;
        if (*w < 1 || *h < 1) throw ParseError("region width/height must be >= 1", line_no);

        RegionRecord rec;
        rec.image_id = std::string(detail::trim(fields[0]));
        if (rec.image_id.empty()) throw ParseError("empty image_id", line_no);
        rec.region = Region{*x, *y, *w, *h, opts.origin};
        rec.english_caption = std::string(fields[5]);
        if (detail::trim(rec.english_caption).empty())
            throw ParseError("empty english_caption", line_no);
        if (fields.size() == 7 && !detail::trim(fields[6]).empty())
            rec.target_caption = std::string(fields[6]);
        rec.language = language;
        rec.split = split;
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<RegionRecord> parse_corpus(const std::string& path, LanguageTag language,
                                              SplitTag split, const ParseOptions& opts = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open corpus file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus_text(buf.str(), language, split, opts);
}

/// Inverse of parse (modulo header and origin metadata): 7-column TSV,
/// empty target field when absent.
inline std::string serialize_corpus(const std::vector<RegionRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        out += rec.image_id;
        out += '\t';
        out += std::to_string(rec.region.x) + '\t' + std::to_string(rec.region.y) + '\t' +
               std::to_string(rec.region.width) + '\t' + std::to_string(rec.region.height);
        out += '\t';
        out += rec.english_caption;
        out += '\t';
        if (rec.target_caption) out += *rec.target_caption;
        out += '\n';
    }
    return out;
}

struct StatsRow {
    int sentence_count = 0;
    long english_tokens = 0;
    long target_tokens = 0;
    int missing_target = 0;  // records with no target caption
};

/// Keyed by (split, language). Counts use the metric tokenizer, i.e. token
/// counts are measured after preprocessing.
struct CorpusStats {
    std::map<std::pair<SplitTag, LanguageTag>, StatsRow> rows;

    const StatsRow& at(SplitTag split, LanguageTag lang) const { return rows.at({split, lang}); }
};

inline CorpusStats compute_stats(const std::vector<RegionRecord>& records,
                                 const text::PreprocessOptions& opts = {}) {
    CorpusStats stats;
    for (const auto& rec : records) {
        StatsRow& row = stats.rows[{rec.split, rec.language}];
        row.sentence_count += 1;
        row.english_tokens += text::word_count(rec.english_caption, opts);
        if (rec.target_caption)
            row.target_tokens += text::word_count(*rec.target_caption, opts);
        else
            row.missing_target += 1;
    }
    return stats;
}

}  // namespace capgen::corpus
