// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// RIBES: rank-correlation evaluation for reordering-heavy translation.
// score = NKT * unigram_precision^alpha * brevity_penalty^beta, where NKT
// is Kendall's tau over aligned word positions rescaled to [0,1].
//
// Word alignment: a hypothesis word that matches exactly one reference
// word (each occurring once) aligns directly. Ambiguous matches are
// disambiguated by growing left/right context windows; sentence boundaries
// participate as context, so identical sentences always align fully and
// score exactly 1.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace capgen::metrics {

using Tokens = std::vector<std::string>;

struct RibesOptions {
    double alpha = 0.25;  // exponent on unigram precision
    double beta = 0.10;   // exponent on brevity penalty
};

struct RibesScore {
    double score = 0.0;
    double nkt = 0.0;
    double unigram_precision = 0.0;
    double bp = 1.0;
    double alpha = 0.25;
    double beta = 0.10;
};

namespace ribes_detail {

// Context classes: in-range tokens compare by value; every position before
// the sentence is BOS, every position past the end is EOS.
enum class CtxClass { bos, token, eos };

inline CtxClass classify(long idx, long size) {
    if (idx < 0) return CtxClass::bos;
    if (idx >= size) return CtxClass::eos;
    return CtxClass::token;
}

inline bool ctx_equal(const Tokens& a, long ia, const Tokens& b, long ib) {
    CtxClass ca = classify(ia, static_cast<long>(a.size()));
    CtxClass cb = classify(ib, static_cast<long>(b.size()));
    if (ca != cb) return false;
    if (ca != CtxClass::token) return true;
    return a[ia] == b[ib];
}

}  // namespace ribes_detail

/// Reference positions aligned to hypothesis words, in hypothesis order.
/// Unalignable words are dropped.
inline std::vector<int> ribes_alignment(const Tokens& hypothesis, const Tokens& reference) {
    std::unordered_map<std::string, std::vector<int>> ref_pos, hyp_pos;
    for (int i = 0; i < static_cast<int>(reference.size()); ++i)
        ref_pos[reference[i]].push_back(i);
    for (int i = 0; i < static_cast<int>(hypothesis.size()); ++i)
        hyp_pos[hypothesis[i]].push_back(i);

    const long hyp_size = static_cast<long>(hypothesis.size());
    std::vector<int> aligned;
    for (int i = 0; i < hyp_size; ++i) {
        auto ref_it = ref_pos.find(hypothesis[i]);
        if (ref_it == ref_pos.end()) continue;
        const std::vector<int>& ref_match = ref_it->second;
        const std::vector<int>& hyp_match = hyp_pos[hypothesis[i]];

        if (ref_match.size() == 1 && hyp_match.size() == 1) {
            aligned.push_back(ref_match[0]);
            continue;
        }

        // Grow context windows on both sides until exactly one candidate
        // survives in both the reference and the hypothesis.
        std::vector<int> left_ref = ref_match, left_hyp = hyp_match;
        std::vector<int> right_ref = ref_match, right_hyp = hyp_match;
        bool left_alive = true, right_alive = true;
        const long max_window = std::max<long>(i + 1, hyp_size - i);
        for (long window = 1; window <= max_window && (left_alive || right_alive); ++window) {
            if (left_alive) {
                std::vector<int> next_ref, next_hyp;
                for (int j : left_ref)
                    if (ribes_detail::ctx_equal(reference, j - window, hypothesis, i - window))
                        next_ref.push_back(j);
                for (int j : left_hyp)
                    if (ribes_detail::ctx_equal(hypothesis, j - window, hypothesis, i - window))
                        next_hyp.push_back(j);
                if (next_ref.size() == 1 && next_hyp.size() == 1) {
                    aligned.push_back(next_ref[0]);
                    left_alive = false;
                    right_alive = false;
                    break;
                }
                left_ref = std::move(next_ref);
                left_hyp = std::move(next_hyp);
                left_alive = !left_ref.empty() && !left_hyp.empty();
            }
            if (right_alive) {
                std::vector<int> next_ref, next_hyp;
                for (int j : right_ref)
                    if (ribes_detail::ctx_equal(reference, j + window, hypothesis, i + window))
                        next_ref.push_back(j);
                for (int j : right_hyp)
                    if (ribes_detail::ctx_equal(hypothesis, j + window, hypothesis, i + window))
                        next_hyp.push_back(j);
                if (next_ref.size() == 1 && next_hyp.size() == 1) {
                    aligned.push_back(next_ref[0]);
                    left_alive = false;
                    right_alive = false;
                    break;
                }
                right_ref = std::move(next_ref);
                right_hyp = std::move(next_hyp);
                right_alive = !right_ref.empty() && !right_hyp.empty();
            }
        }
    }
    return aligned;
}

inline RibesScore ribes(const Tokens& hypothesis, const Tokens& reference,
                        const RibesOptions& options = {}) {
    if (hypothesis.empty() || reference.empty())
        throw std::invalid_argument("ribes: empty input");

    RibesScore result;
    result.alpha = options.alpha;
    result.beta = options.beta;
    result.bp = std::min(1.0, std::exp(1.0 - static_cast<double>(reference.size()) /
                                                 static_cast<double>(hypothesis.size())));

    std::vector<int> aligned = ribes_alignment(hypothesis, reference);
    const long n = static_cast<long>(aligned.size());

    if (n == 1 && reference.size() == 1) {
        // single-word reference fully matched: rank order is trivially perfect
        result.nkt = 1.0;
        result.unigram_precision = 1.0 / static_cast<double>(hypothesis.size());
    } else if (n < 2) {
        result.nkt = 0.0;
        result.unigram_precision = 0.0;
        result.score = 0.0;
        return result;
    } else {
        long ascending = 0;
        for (long i = 0; i < n - 1; ++i)
            for (long j = i + 1; j < n; ++j)
                if (aligned[i] < aligned[j]) ++ascending;
        result.nkt = static_cast<double>(ascending) / static_cast<double>(n * (n - 1) / 2);
        result.unigram_precision =
            static_cast<double>(n) / static_cast<double>(hypothesis.size());
    }

    result.score = result.nkt * std::pow(result.unigram_precision, options.alpha) *
                   std::pow(result.bp, options.beta);
    return result;
}

/// Arithmetic mean of sentence-level RIBES.
inline double ribes_sentence_avg(const std::vector<std::pair<Tokens, Tokens>>& pairs,
                                 const RibesOptions& options = {}) {
    if (pairs.empty()) throw std::invalid_argument("ribes_sentence_avg: empty input");
    double sum = 0.0;
    for (const auto& [hyp, ref] : pairs) sum += ribes(hyp, ref, options).score;
    return sum / static_cast<double>(pairs.size());
}

}  // namespace capgen::metrics
