// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Embedding-based semantic similarity and the normalized ratio metric:
//   sem_sim  = cos(E(gen), E(ref))
//   norm_sem = cos(E(gen), E(src)) / cos(E(ref), E(src))
// The ratio denominator is guarded; |denominator| <= eps marks the value
// undefined instead of dividing.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace capgen::metrics {

inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
    if (u.empty()) throw std::invalid_argument("cosine: empty vectors");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    bool identical = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
        identical = identical && u[i] == v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine: zero vector");
    if (identical) return 1.0;  // avoid sqrt round-off on the x == y diagonal
    double value = dot / (std::sqrt(nu) * std::sqrt(nv));
    return std::clamp(value, -1.0, 1.0);
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    return cosine(std::span<const double>(u), std::span<const double>(v));
}

/// Text to fixed-dimension vector. Implementations must be deterministic
/// and safe for concurrent calls (or internally serialized).
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::string id() const = 0;
    virtual std::vector<double> embed(const std::string& text) = 0;
};

/// Deterministic local embedder: hashed bag of words with signed weights.
/// Exists so the metric math is verifiable offline; not a semantic model.
class HashEmbedder final : public Embedder {
public:
    explicit HashEmbedder(int dim = 64, std::uint64_t seed = 0) : dim_(dim), seed_(seed) {
        if (dim < 2) throw std::invalid_argument("HashEmbedder: dim must be >= 2");
    }

    std::string id() const override {
        return "hash64:d=" + std::to_string(dim_) + ":seed=" + std::to_string(seed_);
    }

    std::vector<double> embed(const std::string& text) override {
        std::vector<double> v(dim_, 0.0);
        std::size_t start = 0;
        auto flush = [&](std::size_t begin, std::size_t end) {
            if (begin >= end) return;
            std::uint64_t h = 14695981039346656037ULL ^ seed_;
            for (std::size_t i = begin; i < end; ++i) {
                h ^= static_cast<unsigned char>(text[i]);
                h *= 1099511628211ULL;
            }
            double sign = (h >> 63) ? -1.0 : 1.0;
            double weight = 0.5 + static_cast<double>((h >> 32) & 0xFFFF) / 65536.0;
            v[h % dim_] += sign * weight;
        };
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == ' ' || text[i] == '\t' || text[i] == '\n') {
                flush(start, i);
                start = i + 1;
            }
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (norm == 0.0) v[0] = 1.0;  // keep non-empty inputs embeddable
        return v;
    }

private:
    int dim_;
    std::uint64_t seed_;
};

struct SimilarityScores {
    double sem_sim = 0.0;       // cos(gen, ref), target side
    double norm_sem = 0.0;      // valid only when norm_defined
    bool norm_defined = false;  // false if |cos(ref, src)| <= eps
};

inline constexpr double kNormRatioEps = 1e-6;

inline SimilarityScores similarity_scores(const std::string& generated,
                                          const std::string& reference,
                                          const std::string& source, Embedder& embedder,
                                          double eps = kNormRatioEps) {
    if (generated.empty() || reference.empty() || source.empty())
        throw std::invalid_argument("similarity_scores: empty input text");
    auto e_gen = embedder.embed(generated);
    auto e_ref = embedder.embed(reference);
    auto e_src = embedder.embed(source);

    SimilarityScores scores;
    scores.sem_sim = cosine(e_gen, e_ref);
    double denominator = cosine(e_ref, e_src);
    if (std::abs(denominator) <= eps) {
        scores.norm_defined = false;
        return scores;
    }
    scores.norm_sem = cosine(e_gen, e_src) / denominator;
    scores.norm_defined = true;
    return scores;
}

}  // namespace capgen::metrics
