// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"

namespace policy2label {
namespace {

Vector embed_or_throw(const SentenceEmbedder& embedder, std::string_view text) {
  try {
    return embedder.embed(text);
  } catch (const EmbeddingUnavailable&) {
    throw;
  } catch (const std::exception& e) {
    throw EmbeddingUnavailable(std::string("embedding failed: ") + e.what());
  }
}

}  // namespace

std::vector<Segment> segment(const std::vector<Sentence>& sentences,
                             const SentenceEmbedder& embedder,
                             const SegmenterConfig& config) {
  std::vector<Segment> segments;
  for (const auto& sentence : sentences) {
    Vector sentence_vector = embed_or_throw(embedder, sentence.text);
    if (!segments.empty()) {
      Segment& current = segments.back();
      if (current.sentence_count < kMaxSentencesPerSegment &&
          cosine_similarity(*current.embedding, sentence_vector) >=
              config.similarity_threshold) {
        current.text += ' ';
        current.text += sentence.text;
        ++current.sentence_count;
        current.embedding = embed_or_throw(embedder, current.text);
        continue;
      }
    }
    Segment next;
    next.segment_id = segments.size();
    next.first_sentence = sentence.index;
    next.sentence_count = 1;
    next.text = sentence.text;
    next.embedding = std::move(sentence_vector);
    segments.push_back(std::move(next));
  }
  return segments;
}

}  // namespace policy2label
