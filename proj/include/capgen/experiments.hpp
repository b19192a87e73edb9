// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Weight-sweep experiment runner: sample a seeded subset, run the pipeline
// once per record for context and translation, once per (record, weight)
// for captioning, average the metrics and emit a report table.
//
// Context and translation are computed once per record and reused for
// every weight; the weight only enters the caption prompt.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "capgen/corpus.hpp"
#include "capgen/errors.hpp"
#include "capgen/metrics/bleu.hpp"
#include "capgen/metrics/ribes.hpp"
#include "capgen/metrics/similarity.hpp"
#include "capgen/pipeline.hpp"
#include "capgen/text.hpp"

namespace capgen::experiments {

struct SweepConfig {
    int subset_size = 250;
    std::uint64_t seed = 0;
    std::vector<int> weights = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    corpus::LanguageTag language = corpus::LanguageTag::hi;
    int jobs = 4;
    bool include_ribes = false;
    metrics::BleuOptions bleu;
    metrics::RibesOptions ribes;
    text::PreprocessOptions preprocess;

    void validate() const {
        if (subset_size < 1) throw std::invalid_argument("sweep: subset_size must be >= 1");
        if (weights.empty()) throw std::invalid_argument("sweep: empty weight grid");
        int prev = -1;
        for (int w : weights) {
            if (w < 0 || w > 100 || w <= prev)
                throw std::invalid_argument(
                    "sweep: weights must be strictly increasing within [0,100]");
            prev = w;
        }
    }
};

struct MetricRow {
    int weight = 0;
    double avg_bleu = 0.0;      // fraction in [0,1]; reports print percent
    double avg_sem_sim = 0.0;
    double avg_norm_sem = 0.0;  // averaged over defined values only
    int n = 0;
    int undefined_norm_count = 0;
    std::optional<double> avg_ribes;
};

struct RecordProvenance {
    std::string record_key;
    std::vector<std::string> context_keys;
    std::vector<std::string> translate_keys;
    std::map<int, std::string> caption_keys;  // weight -> cache key
};

struct SweepResult {
    std::vector<MetricRow> rows;
    std::vector<RecordProvenance> provenance;
    std::vector<std::string> warnings;
    int failed_records = 0;
};

/// Uniform sample without replacement, deterministic for a given seed.
/// Returned records keep the original corpus order.
inline std::vector<corpus::RegionRecord> sample_subset(
    const std::vector<corpus::RegionRecord>& records, int n, std::uint64_t seed) {
    if (n < 0 || static_cast<std::size_t>(n) > records.size())
        throw std::invalid_argument("sample_subset: n exceeds record count");
    std::vector<std::size_t> indices(records.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) {
        // bounded draw kept platform-stable on purpose (uniform_int_distribution is not)
        std::size_t j = i + static_cast<std::size_t>(rng() % (indices.size() - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    std::sort(indices.begin(), indices.end());
    std::vector<corpus::RegionRecord> subset;
    subset.reserve(n);
    for (std::size_t idx : indices) subset.push_back(records[idx]);
    return subset;
}

namespace detail {

template <typename Fn>
void parallel_for(int jobs, std::size_t count, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    int n_threads = std::min<int>(jobs, static_cast<int>(count));
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace detail

inline SweepResult run_sweep(const SweepConfig& config,
                             const std::vector<corpus::RegionRecord>& records,
                             pipeline::Pipeline& pipe) {
    config.validate();
    auto subset = sample_subset(records, config.subset_size, config.seed);

    struct Upstream {
        bool ok = false;
        std::string error;
        translation::TranslatedContext context;
        std::vector<std::string> upstream_keys;
        metrics::Tokens ref_tokens;
        RecordProvenance provenance;
    };

    SweepResult result;
    std::vector<Upstream> upstream(subset.size());
    std::mutex warn_mu;

    // Phase 1: context + translation, once per record.
    detail::parallel_for(config.jobs, subset.size(), [&](std::size_t i) {
        const auto& record = subset[i];
        Upstream& up = upstream[i];
        up.provenance.record_key = record.artifact_key();
        try {
            if (!record.target_caption)
                throw std::invalid_argument("record has no target-language reference");
            up.ref_tokens = text::tokenize(*record.target_caption, config.preprocess);
            if (up.ref_tokens.empty())
                throw std::invalid_argument("target reference empty after preprocessing");

            auto fused = pipe.make_context(record);
            {
                std::lock_guard lock(warn_mu);
                for (auto& w : fused.warnings)
                    result.warnings.push_back(up.provenance.record_key + ": " + w);
            }
            up.context = pipe.translate_context(fused.conversation, config.language);
            up.provenance.context_keys = fused.cache_keys;
            up.provenance.translate_keys = up.context.cache_keys;
            up.upstream_keys = fused.cache_keys;
            up.upstream_keys.insert(up.upstream_keys.end(), up.context.cache_keys.begin(),
                                    up.context.cache_keys.end());
            up.ok = true;
        } catch (const std::exception& e) {
            up.error = e.what();
        }
    });

    for (const auto& up : upstream) {
        if (!up.ok) {
            ++result.failed_records;
            result.warnings.push_back(up.provenance.record_key + ": excluded: " + up.error);
        }
    }

    // Phase 2: one caption per (record, weight); metrics averaged per weight.
    struct Sample {
        bool ok = false;
        double bleu = 0, sem = 0, norm = 0, ribes = 0;
        bool norm_defined = false;
        std::string caption_key;
        std::string error;
    };

    std::vector<std::map<int, std::string>> caption_keys(subset.size());
    for (int weight : config.weights) {
        auto weight_config = captioner::WeightConfig::from_context_percent(weight);
        std::vector<Sample> samples(subset.size());
        detail::parallel_for(config.jobs, subset.size(), [&](std::size_t i) {
            if (!upstream[i].ok) return;
            const auto& record = subset[i];
            Sample& sample = samples[i];
            try {
                auto caption = pipe.make_caption(record, upstream[i].context, weight_config,
                                                 upstream[i].upstream_keys);
                sample.caption_key = caption.provenance.back();
                auto hyp_tokens = text::tokenize(caption.text, config.preprocess);
                sample.bleu =
                    hyp_tokens.empty()
                        ? 0.0
                        : metrics::bleu_sentence(hyp_tokens, upstream[i].ref_tokens, config.bleu)
                              .score;
                if (config.include_ribes)
                    sample.ribes = hyp_tokens.empty()
                                       ? 0.0
                                       : metrics::ribes(hyp_tokens, upstream[i].ref_tokens,
                                                        config.ribes)
                                             .score;
                // similarity on raw text (tokenizer-independent)
                auto sim = metrics::similarity_scores(
                    caption.text.empty() ? " " : caption.text, *record.target_caption,
                    record.english_caption, pipe.embedder());
                sample.sem = sim.sem_sim;
                sample.norm_defined = sim.norm_defined;
                sample.norm = sim.norm_sem;
                sample.ok = true;
            } catch (const std::exception& e) {
                sample.error = e.what();
            }
        });

        MetricRow row;
        row.weight = weight;
        double bleu_sum = 0, sem_sum = 0, norm_sum = 0, ribes_sum = 0;
        int norm_n = 0;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (!upstream[i].ok) continue;
            const Sample& sample = samples[i];
            if (!sample.ok) {
                result.warnings.push_back(upstream[i].provenance.record_key + " @" +
                                          std::to_string(weight) + ": " + sample.error);
                continue;
            }
            caption_keys[i][weight] = sample.caption_key;
            row.n += 1;
            bleu_sum += sample.bleu;
            sem_sum += sample.sem;
            ribes_sum += sample.ribes;
            if (sample.norm_defined) {
                norm_sum += sample.norm;
                ++norm_n;
            } else {
                ++row.undefined_norm_count;
            }
        }
        if (row.n > 0) {
            row.avg_bleu = bleu_sum / row.n;
            row.avg_sem_sim = sem_sum / row.n;
            if (config.include_ribes) row.avg_ribes = ribes_sum / row.n;
        }
        if (norm_n > 0) row.avg_norm_sem = norm_sum / norm_n;
        result.rows.push_back(row);
    }

    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (!upstream[i].ok) continue;
        RecordProvenance prov = upstream[i].provenance;
        prov.caption_keys = std::move(caption_keys[i]);
        result.provenance.push_back(std::move(prov));
    }
    return result;
}

struct ReportMeta {
    std::string lang;
    int subset = 0;
    std::uint64_t seed = 0;
    std::string tokenizer = "whitespace+preprocess";
    std::string smoothing = "floor:0.1";
    std::string embedder;
    std::string backends;

    bool operator==(const ReportMeta&) const = default;
};

enum class ReportFormat { tsv, markdown };

namespace detail {

inline std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace detail

/// Renders the sweep table. BLEU is printed as percent, similarity columns
/// as fractions, all with 4 decimals. The header block carries everything
/// needed to interpret (and re-parse) the numbers.
inline std::string emit_report(const std::vector<MetricRow>& rows, ReportFormat format,
                               const ReportMeta& meta) {
    if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
    bool with_ribes = rows.front().avg_ribes.has_value();

    std::string head;
    head += "# capgen sweep report\n";
    head += "# lang=" + meta.lang + "\n";
    head += "# subset=" + std::to_string(meta.subset) + "\n";
    head += "# seed=" + std::to_string(meta.seed) + "\n";
    head += "# tokenizer=" + meta.tokenizer + "\n";
    head += "# smoothing=" + meta.smoothing + "\n";
    head += "# bleu_scale=percent\n";
    head += "# embedder=" + meta.embedder + "\n";
    head += "# backends=" + meta.backends + "\n";
    head += "# undefined_norm=";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) head += ',';
        head += std::to_string(rows[i].undefined_norm_count);
    }
    head += '\n';

    std::string out;
    if (format == ReportFormat::tsv) {
        out = head;
        out += "Weight\tBLEU\tSem. Sim.\tNorm. Sem.\tN";
        if (with_ribes) out += "\tRIBES";
        out += '\n';
        for (const auto& row : rows) {
            out += std::to_string(row.weight) + '\t' + detail::fixed4(row.avg_bleu * 100) +
                   '\t' + detail::fixed4(row.avg_sem_sim) + '\t' +
                   detail::fixed4(row.avg_norm_sem) + '\t' + std::to_string(row.n);
            if (with_ribes) out += '\t' + detail::fixed4(*row.avg_ribes);
            out += '\n';
        }
    } else {
        out = head + "\n";
        out += "| Weight | BLEU | Sem. Sim. | Norm. Sem. | N |";
        if (with_ribes) out += " RIBES |";
        out += "\n|---:|---:|---:|---:|---:|";
        if (with_ribes) out += "---:|";
        out += '\n';
        for (const auto& row : rows) {
            out += "| " + std::to_string(row.weight) + " | " +
                   detail::fixed4(row.avg_bleu * 100) + " | " + detail::fixed4(row.avg_sem_sim) +
                   " | " + detail::fixed4(row.avg_norm_sem) + " | " + std::to_string(row.n) +
                   " |";
            if (with_ribes) out += " " + detail::fixed4(*row.avg_ribes) + " |";
            out += '\n';
        }
    }
    return out;
}

/// Reads a TSV report back into rows + meta. Inverse of emit_report up to
/// the printed precision.
inline std::pair<std::vector<MetricRow>, ReportMeta> parse_report(const std::string& text) {
    std::vector<MetricRow> rows;
    ReportMeta meta;
    std::vector<int> undefined;
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    bool has_ribes = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2);
            std::string value = line.substr(eq + 1);
            if (key == "lang") meta.lang = value;
            else if (key == "subset") meta.subset = std::stoi(value);
            else if (key == "seed") meta.seed = std::stoull(value);
            else if (key == "tokenizer") meta.tokenizer = value;
            else if (key == "smoothing") meta.smoothing = value;
            else if (key == "embedder") meta.embedder = value;
            else if (key == "backends") meta.backends = value;
            else if (key == "undefined_norm") {
                std::istringstream vs(value);
                std::string item;
                while (std::getline(vs, item, ',')) undefined.push_back(std::stoi(item));
            }
            continue;
        }
        if (!saw_header) {
            if (line.rfind("Weight\t", 0) != 0) throw ParseError("report: bad column header");
            has_ribes = line.find("\tRIBES") != std::string::npos;
            saw_header = true;
            continue;
        }
        std::istringstream fields(line);
        std::string f;
        MetricRow row;
        std::getline(fields, f, '\t');
        row.weight = std::stoi(f);
        std::getline(fields, f, '\t');
        row.avg_bleu = std::stod(f) / 100.0;
        std::getline(fields, f, '\t');
        row.avg_sem_sim = std::stod(f);
        std::getline(fields, f, '\t');
        row.avg_norm_sem = std::stod(f);
        std::getline(fields, f, '\t');
        row.n = std::stoi(f);
        if (has_ribes && std::getline(fields, f, '\t')) row.avg_ribes = std::stod(f);
        rows.push_back(row);
    }
    if (!saw_header) throw ParseError("report: no table found");
    for (std::size_t i = 0; i < rows.size() && i < undefined.size(); ++i)
        rows[i].undefined_norm_count = undefined[i];
    return {rows, meta};
}

inline nlohmann::json provenance_json(const RecordProvenance& prov) {
    nlohmann::json captions = nlohmann::json::object();
    for (const auto& [weight, key] : prov.caption_keys)
        captions[std::to_string(weight)] = key;
    return {{"record", prov.record_key},
            {"context_keys", prov.context_keys},
            {"translate_keys", prov.translate_keys},
            {"caption_keys", captions}};
}

}  // namespace capgen::experiments
