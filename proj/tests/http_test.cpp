#include <atomic>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tog/datagen.hpp"
#include "tog/errors.hpp"
#include "tog/lang.hpp"
#include "tog/nn.hpp"

namespace {

using json = nlohmann::json;

class LocalServer {
 public:
  LocalServer() {
    server_.Post("/llm", [this](const httplib::Request& req, httplib::Response& res) {
      ++llm_requests;
      last_llm_body = req.body;
      if (llm_failures_left > 0) {
        --llm_failures_left;
        res.status = 500;
        res.set_content("overloaded", "text/plain");
        return;
      }
      const json request = json::parse(req.body);
      const json reply{{"text", "echo: " + request.at("prompt").get<std::string>()}};
      res.set_content(reply.dump(), "application/json");
    });
    server_.Post("/llm_junk", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("this is not json", "text/plain");
    });
    server_.Post("/llm_wrong", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(json{{"completion", "missing the text key"}}.dump(), "application/json");
    });
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      ++embed_requests;
      last_embed_body = req.body;
      res.set_content(embed_reply, "application/json");
    });
    server_.Post("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(json{{"text", "root"}}.dump(), "application/json");
    });

    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

  std::atomic<int> llm_requests{0};
  std::atomic<int> embed_requests{0};
  int llm_failures_left = 0;
  std::string last_llm_body;
  std::string last_embed_body;
  std::string embed_reply;

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

std::string rows_reply(std::size_t rows, std::size_t dim, double base) {
  json vectors = json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < dim; ++c) row.push_back(base + static_cast<double>(r * dim + c));
    vectors.push_back(row);
  }
  return json{{"vectors", vectors}}.dump();
}

TEST(HttpLlm, RoundTripsPromptTemperatureAndTokenBudget) {
  LocalServer server;
  tog::data::HttpLlmClient client(server.url("/llm"), 5, 0);
  const std::string reply = client.complete("describe the mug", 0.25, 64);
  EXPECT_EQ(reply, "echo: describe the mug");
  EXPECT_EQ(server.llm_requests.load(), 1);

  const json sent = json::parse(server.last_llm_body);
  EXPECT_EQ(sent.at("prompt"), "describe the mug");
  EXPECT_DOUBLE_EQ(sent.at("temperature").get<double>(), 0.25);
  EXPECT_EQ(sent.at("max_tokens").get<std::size_t>(), 64u);
}

TEST(HttpLlm, PathlessEndpointPostsToTheRoot) {
  LocalServer server;
  tog::data::HttpLlmClient client(server.url(""), 5, 0);
  EXPECT_EQ(client.complete("hi", 1.0, 8), "root");
}

TEST(HttpLlm, RetriesUntilTheServerRecovers) {
  LocalServer server;
  server.llm_failures_left = 2;
  tog::data::HttpLlmClient client(server.url("/llm"), 5, 3);
  EXPECT_EQ(client.complete("try again", 1.0, 8), "echo: try again");
  EXPECT_EQ(server.llm_requests.load(), 3);
}

TEST(HttpLlm, GivesUpAfterTheRetryBudget) {
  LocalServer server;
  server.llm_failures_left = 10;
  tog::data::HttpLlmClient client(server.url("/llm"), 5, 1);
  EXPECT_THROW(client.complete("never works", 1.0, 8), tog::RetryExhausted);
  EXPECT_EQ(server.llm_requests.load(), 2);

  tog::data::HttpLlmClient unreachable("http://127.0.0.1:9/llm", 1, 0);
  EXPECT_THROW(unreachable.complete("nobody home", 1.0, 8), tog::RetryExhausted);
}

TEST(HttpLlm, MalformedRepliesFailLoudly) {
  LocalServer server;
  tog::data::HttpLlmClient junk(server.url("/llm_junk"), 5, 0);
  EXPECT_THROW(junk.complete("hello", 1.0, 8), tog::ClientFailure);

  tog::data::HttpLlmClient wrong(server.url("/llm_wrong"), 5, 0);
  EXPECT_THROW(wrong.complete("hello", 1.0, 8), tog::ClientFailure);
}

TEST(HttpLlm, RejectsMalformedEndpoints) {
  tog::data::HttpLlmClient no_scheme("127.0.0.1/llm", 5, 0);
  EXPECT_THROW(no_scheme.complete("hello", 1.0, 8), tog::InvalidInput);

  tog::data::HttpLlmClient no_host("http:///llm", 5, 0);
  EXPECT_THROW(no_host.complete("hello", 1.0, 8), tog::InvalidInput);
}

TEST(HttpEmbedding, RoundTripsTokensAndPadsToTheBudget) {
  LocalServer server;
  server.embed_reply = rows_reply(2, 4, 0.5);
  tog::lang::HttpEmbeddingProvider provider(server.url("/embed"), 4, 5, 0);

  const auto out = provider.embed({"hello", "world"}, 3);
  EXPECT_EQ(json::parse(server.last_embed_body).at("text"), "hello world");
  ASSERT_EQ(out.matrix.shape(), (std::vector<std::size_t>{3, 4}));
  ASSERT_EQ(out.mask, (tog::nn::Mask{1, 1, 0}));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      EXPECT_DOUBLE_EQ(out.matrix.at(r, c), 0.5 + static_cast<double>(r * 4 + c));
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(out.matrix.at(2, c), 0.0);
}

TEST(HttpEmbedding, TruncatesExtraRowsAtTheBudget) {
  LocalServer server;
  server.embed_reply = rows_reply(5, 4, 0.0);
  tog::lang::HttpEmbeddingProvider provider(server.url("/embed"), 4, 5, 0);
  const auto out = provider.embed({"a", "b", "c", "d", "e"}, 2);
  ASSERT_EQ(out.matrix.shape(), (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(out.mask, (tog::nn::Mask{1, 1}));
}

TEST(HttpEmbedding, MalformedRepliesFailLoudly) {
  LocalServer server;
  tog::lang::HttpEmbeddingProvider provider(server.url("/embed"), 4, 5, 0);

  server.embed_reply = "not json";
  EXPECT_THROW(provider.embed({"a"}, 2), tog::ClientFailure);

  server.embed_reply = json{{"rows", json::array()}}.dump();
  EXPECT_THROW(provider.embed({"a"}, 2), tog::ClientFailure);

  server.embed_reply = json{{"vectors", json::array()}}.dump();
  EXPECT_THROW(provider.embed({"a"}, 2), tog::ClientFailure);

  server.embed_reply = rows_reply(1, 3, 0.0);  // wrong width
  EXPECT_THROW(provider.embed({"a"}, 2), tog::ClientFailure);
}

TEST(HttpEmbedding, NetworkAndInputFailures) {
  tog::lang::HttpEmbeddingProvider unreachable("http://127.0.0.1:9/embed", 4, 1, 0);
  EXPECT_THROW(unreachable.embed({"a"}, 2), tog::RetryExhausted);
  EXPECT_THROW(unreachable.embed({}, 2), tog::EmptyText);
}

}  // namespace
