#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "tog/nn.hpp"
#include "tog/random.hpp"
#include "tog/tensor.hpp"

namespace tog::lang {

// Lowercased whitespace tokens with leading/trailing punctuation stripped;
// empty tokens are dropped and the sequence is truncated to max_tokens.
std::vector<std::string> tokenize(const std::string& text, std::size_t max_tokens);

// Fixed-length embedding matrix with a validity mask; masked rows are zero
// as produced, though downstream projection re-zeroes them regardless.
struct PaddedEmbeddings {
  Tensor matrix;  // (t_max, dim)
  nn::Mask mask;  // length t_max
};

// Frozen text embedding source; implementations are immutable after
// construction and safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual PaddedEmbeddings embed(const std::vector<std::string>& tokens, std::size_t t_max) const = 0;

  PaddedEmbeddings embed_text(const std::string& text, std::size_t t_max) const;
};

// Deterministic stand-in for a frozen language model: each distinct token
// maps to a unit-norm Gaussian vector seeded by a stable hash of the token.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dim = 768, std::uint64_t seed = 0);

  std::size_t dim() const override { return dim_; }
  PaddedEmbeddings embed(const std::vector<std::string>& tokens, std::size_t t_max) const override;

 private:
  std::vector<double> token_vector(const std::string& token) const;

  std::size_t dim_;
  std::uint64_t seed_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::vector<double>> cache_;
};

// Remote embedding service: POST {"text": ...} returning {"vectors": [[...]]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string endpoint, std::size_t dim = 768, int timeout_seconds = 30, int retries = 3);

  std::size_t dim() const override { return dim_; }
  PaddedEmbeddings embed(const std::vector<std::string>& tokens, std::size_t t_max) const override;

 private:
  std::string endpoint_;
  std::size_t dim_;
  int timeout_seconds_;
  int retries_;
};

// Projects provider embeddings to the model width and re-zeroes padded
// rows: (t_max, dim) -> (t_max, model_dim).
nn::Value project_to_model_dim(const PaddedEmbeddings& embeddings, const nn::Value& w, const nn::Value& b);

}  // namespace tog::lang
