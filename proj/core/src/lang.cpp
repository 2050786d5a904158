#include "tog/lang.hpp"

#include <cctype>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tog/errors.hpp"
#include "net_util.hpp"

namespace tog::lang {

namespace {

bool is_strip_char(char c) {
  static const std::string kStrip = ".,:;!?\"'()[]{}";
  return kStrip.find(c) != std::string::npos;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text, std::size_t max_tokens) {
  if (max_tokens == 0) throw InvalidInput("tokenize: max_tokens must be positive");
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    std::size_t begin = 0, end = current.size();
    while (begin < end && is_strip_char(current[begin])) ++begin;
    while (end > begin && is_strip_char(current[end - 1])) --end;
    if (end > begin && tokens.size() < max_tokens) tokens.push_back(current.substr(begin, end - begin));
    current.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  if (tokens.empty()) throw EmptyText("tokenize: no tokens in input");
  return tokens;
}

PaddedEmbeddings EmbeddingProvider::embed_text(const std::string& text, std::size_t t_max) const {
  return embed(tokenize(text, t_max), t_max);
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw InvalidInput("HashEmbeddingProvider: dim must be positive");
}

std::vector<double> HashEmbeddingProvider::token_vector(const std::string& token) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(token);
    if (it != cache_.end()) return it->second;
  }
  Rng rng(mix_seed(stable_hash(token), seed_));
  std::vector<double> v(dim_);
  double norm = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm < 1e-12) {
    v.assign(dim_, 0.0);
    v[0] = 1.0;
  } else {
    for (double& x : v) x /= norm;
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return cache_.emplace(token, std::move(v)).first->second;
}

PaddedEmbeddings HashEmbeddingProvider::embed(const std::vector<std::string>& tokens, std::size_t t_max) const {
  if (tokens.empty()) throw EmptyText("embed: no tokens");
  if (t_max == 0) throw InvalidInput("embed: t_max must be positive");
  PaddedEmbeddings out;
  out.matrix = Tensor({t_max, dim_});
  out.mask.assign(t_max, 0);
  const std::size_t n = std::min(tokens.size(), t_max);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = token_vector(tokens[i]);
    for (std::size_t c = 0; c < dim_; ++c) out.matrix.at(i, c) = v[c];
    out.mask[i] = 1;
  }
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string endpoint, std::size_t dim, int timeout_seconds,
                                             int retries)
    : endpoint_(std::move(endpoint)), dim_(dim), timeout_seconds_(timeout_seconds), retries_(retries) {}

PaddedEmbeddings HttpEmbeddingProvider::embed(const std::vector<std::string>& tokens, std::size_t t_max) const {
  if (tokens.empty()) throw EmptyText("embed: no tokens");
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) text.push_back(' ');
    text += tokens[i];
  }
  nlohmann::json request{{"text", text}};

  std::string payload;
  std::string last_error = "no attempts made";
  for (int attempt = 0; attempt <= retries_; ++attempt) {
    const auto target = detail::split_url(endpoint_);
    httplib::Client client(target.base);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    auto res = client.Post(target.path, request.dump(), "application/json");
    if (res && res->status == 200) {
      payload = res->body;
      break;
    }
    last_error = res ? "status " + std::to_string(res->status) : "connection failed";
    if (attempt == retries_) throw RetryExhausted("embedding request failed: " + last_error);
  }

  nlohmann::json reply = nlohmann::json::parse(payload, nullptr, false);
  if (reply.is_discarded() || !reply.contains("vectors") || !reply["vectors"].is_array())
    throw ClientFailure("embedding reply missing vectors array");
  const auto& vectors = reply["vectors"];

  PaddedEmbeddings out;
  out.matrix = Tensor({t_max, dim_});
  out.mask.assign(t_max, 0);
  const std::size_t n = std::min(vectors.size(), t_max);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = vectors[i];
    if (!row.is_array() || row.size() != dim_) throw ClientFailure("embedding reply has a malformed row");
    for (std::size_t c = 0; c < dim_; ++c) out.matrix.at(i, c) = row[c].get<double>();
    out.mask[i] = 1;
  }
  if (n == 0) throw ClientFailure("embedding reply was empty");
  return out;
}

nn::Value project_to_model_dim(const PaddedEmbeddings& embeddings, const nn::Value& w, const nn::Value& b) {
  if (embeddings.mask.size() != embeddings.matrix.rows())
    throw ShapeMismatch("project_to_model_dim: mask length mismatch");
  bool any = false;
  for (auto m : embeddings.mask) any = any || m;
  if (!any) throw AllKeysMasked("project_to_model_dim: fully masked input");
  nn::Value x = nn::constant(embeddings.matrix);
  return nn::zero_rows(nn::linear(x, w, b), embeddings.mask);
}

}  // namespace tog::lang
