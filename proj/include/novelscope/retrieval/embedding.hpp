// Copyright 2026 The Novelscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "novelscope/ingest/transport.hpp"

namespace novelscope::retrieval {

struct EmbeddingVector {
  std::vector<double> values;
  std::string model_id;
};

// Text in, unit-length fixed-dimension vector out. Deterministic for a given
// model and input. Throws kBadRequest for empty text and
// kProviderUnavailable when a remote model cannot be reached.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbeddingVector embed(const std::string& text) = 0;
  virtual std::string model_id() const = 0;
  virtual std::size_t dimension() const = 0;
};

inline constexpr const char* kDefaultEmbeddingModel = "sentence-transformers/all-MiniLM-L6-v2";

// Feature hashing of lowercased unigrams and bigrams (stopwords dropped from
// unigrams) with signed buckets and sublinear term frequency. Needs no model
// download, so it is the default for offline runs and tests.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dimension = 384);

  EmbeddingVector embed(const std::string& text) override;
  std::string model_id() const override;
  std::size_t dimension() const override { return dim_; }

 private:
  std::size_t dim_;
};

// Hosted feature-extraction endpoint that takes {"inputs": text} and returns
// a flat array of floats (the Hugging Face inference API shape).
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  RemoteEmbedder(std::shared_ptr<ingest::Transport> transport, std::string endpoint_url,
                 std::string api_key, std::string model = kDefaultEmbeddingModel,
                 std::size_t dimension = 384);

  EmbeddingVector embed(const std::string& text) override;
  std::string model_id() const override { return model_; }
  std::size_t dimension() const override { return dim_; }

 private:
  std::shared_ptr<ingest::Transport> transport_;
  std::string url_;
  std::string api_key_;
  std::string model_;
  std::size_t dim_;
};

// Scales to unit length; an all-zero input becomes the first basis vector.
void normalize(std::vector<double>& v);

// Dot product over the norms, clamped to [-1, 1]. Throws kDimensionMismatch.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Clamps negatives to 0 for user-facing percentages.
double display_similarity(double raw);

}  // namespace novelscope::retrieval
