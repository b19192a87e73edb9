// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// BLEU: geometric mean of clipped n-gram precisions times a brevity
// penalty. Corpus scoring sums clipped counts corpus-wide; sentence
// scoring treats one pair as a corpus of one. Orders for which the
// hypothesis has no n-grams at all are excluded from the geometric mean
// rather than treated as zero.
#pragma once

#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace capgen::metrics {

using Tokens = std::vector<std::string>;

enum class Smoothing {
    none,   // zero clipped counts make the whole score zero
    floor,  // zero clipped counts are replaced by floor_eps
};

struct BleuOptions {
    int max_n = 4;
    Smoothing smoothing = Smoothing::floor;
    double floor_eps = 0.1;
};

struct BleuScore {
    double score = 0.0;
    std::vector<double> precisions;  // one entry per evaluated order (n = 1, 2, ...)
    double brevity_penalty = 1.0;
    long hyp_length = 0;
    long ref_length = 0;
};

namespace bleu_detail {

using NgramCounts = std::map<std::vector<std::string>, long>;

inline NgramCounts ngram_counts(const Tokens& sentence, int n) {
    NgramCounts counts;
    if (static_cast<int>(sentence.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= sentence.size(); ++i)
        ++counts[std::vector<std::string>(sentence.begin() + i, sentence.begin() + i + n)];
    return counts;
}

}  // namespace bleu_detail

inline BleuScore bleu_corpus(const std::vector<Tokens>& hypotheses,
                             const std::vector<Tokens>& references,
                             const BleuOptions& options = {}) {
    if (hypotheses.size() != references.size())
        throw std::invalid_argument("bleu_corpus: hypothesis/reference count mismatch");
    if (hypotheses.empty()) throw std::invalid_argument("bleu_corpus: empty corpus");
    if (options.max_n < 1) throw std::invalid_argument("bleu_corpus: max_n must be >= 1");

    std::vector<long> matches(options.max_n, 0);
    std::vector<long> totals(options.max_n, 0);
    long hyp_len = 0, ref_len = 0;

    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        const Tokens& hyp = hypotheses[s];
        const Tokens& ref = references[s];
        hyp_len += static_cast<long>(hyp.size());
        ref_len += static_cast<long>(ref.size());
        for (int n = 1; n <= options.max_n; ++n) {
            auto hyp_counts = bleu_detail::ngram_counts(hyp, n);
            if (hyp_counts.empty()) continue;
            auto ref_counts = bleu_detail::ngram_counts(ref, n);
            long total = 0, clipped = 0;
            for (const auto& [gram, count] : hyp_counts) {
                total += count;
                auto it = ref_counts.find(gram);
                if (it != ref_counts.end()) clipped += std::min(count, it->second);
            }
            assert(clipped <= total);
            matches[n - 1] += clipped;
            totals[n - 1] += total;
        }
    }

    BleuScore result;
    result.hyp_length = hyp_len;
    result.ref_length = ref_len;
    result.brevity_penalty =
        hyp_len == 0 ? 0.0
                     : (hyp_len > ref_len ? 1.0
                                          : std::exp(1.0 - static_cast<double>(ref_len) /
                                                               static_cast<double>(hyp_len)));

    double log_sum = 0.0;
    bool zero_precision = false;
    for (int n = 1; n <= options.max_n; ++n) {
        if (totals[n - 1] == 0) continue;  // no n-grams of this order anywhere
        double numer = static_cast<double>(matches[n - 1]);
        if (matches[n - 1] == 0 && options.smoothing == Smoothing::floor)
            numer = options.floor_eps;
        double precision = numer / static_cast<double>(totals[n - 1]);
        result.precisions.push_back(precision);
        if (precision == 0.0)
            zero_precision = true;
        else
            log_sum += std::log(precision);
    }

    if (result.precisions.empty() || zero_precision || hyp_len == 0) {
        result.score = 0.0;
        return result;
    }
    result.score = result.brevity_penalty *
                   std::exp(log_sum / static_cast<double>(result.precisions.size()));
    return result;
}

inline BleuScore bleu_sentence(const Tokens& hypothesis, const Tokens& reference,
                               const BleuOptions& options = {}) {
    return bleu_corpus({hypothesis}, {reference}, options);
}

/// Arithmetic mean of smoothed sentence-level BLEU; the sweep-table metric.
inline double bleu_sentence_avg(const std::vector<std::pair<Tokens, Tokens>>& pairs,
                                const BleuOptions& options = {}) {
    if (pairs.empty()) throw std::invalid_argument("bleu_sentence_avg: empty input");
    double sum = 0.0;
    for (const auto& [hyp, ref] : pairs) sum += bleu_sentence(hyp, ref, options).score;
    return sum / static_cast<double>(pairs.size());
}

}  // namespace capgen::metrics
