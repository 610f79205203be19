#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>

namespace llm4tg::harness {

/// An OpenAI-compatible chat completion endpoint.
struct ModelEndpoint {
  std::string base_url = "https://api.openai.com/v1";
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";  // name of the variable, never the key
  std::chrono::milliseconds timeout{120'000};
  int max_retries = 5;
  int parallelism = 4;
  int rate_per_minute = 0;  // 0 = unlimited
  std::chrono::milliseconds initial_backoff{1'000};
  double temperature = 0.0;
};

struct ModelRequest {
  std::string graph_id;
  std::string prompt;
};

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string model_name() const = 0;
  /// Returns the model's reply text. Must be safe to call concurrently.
  virtual std::string complete(const ModelRequest& request) = 0;
};

/// Blocks callers so that at most `per_minute` acquisitions happen in any
/// sliding 60-second window.
class RateLimiter {
 public:
  explicit RateLimiter(int per_minute, std::chrono::milliseconds window = std::chrono::minutes(1));
  void acquire();

 private:
  int per_minute_;
  std::chrono::milliseconds window_;
  std::mutex mutex_;
  std::deque<std::chrono::steady_clock::time_point> recent_;
};

class HttpModelClient : public ModelClient {
 public:
  /// Throws AuthError when the credential variable is unset or empty, and
  /// std::invalid_argument for a bad URL or non-positive limits.
  explicit HttpModelClient(ModelEndpoint endpoint);
  ~HttpModelClient() override;

  std::string model_name() const override { return endpoint_.model; }

  /// Retries 429, 5xx and connection failures with exponential backoff.
  /// Throws AuthError (401/403), RateLimited (429 after retries),
  /// TimeoutError, or TransportError.
  std::string complete(const ModelRequest& request) override;

 private:
  ModelEndpoint endpoint_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::counting_semaphore<1024> slots_;
  RateLimiter limiter_;
};

/// Test double: replies from a fixed table keyed by graph id, falling back
/// to a default reply or to a callback.
class ScriptedModelClient : public ModelClient {
 public:
  using Responder = std::function<std::string(const ModelRequest&)>;

  explicit ScriptedModelClient(std::map<std::string, std::string> replies, std::string fallback = {},
                               std::string model = "scripted");
  explicit ScriptedModelClient(Responder responder, std::string model = "scripted");

  std::string model_name() const override { return model_; }
  std::string complete(const ModelRequest& request) override;

  std::size_t calls() const;

 private:
  std::map<std::string, std::string> replies_;
  std::string fallback_;
  Responder responder_;
  std::string model_;
  mutable std::mutex mutex_;
  std::size_t calls_ = 0;
};

std::string query(ModelClient& client, const ModelRequest& request);

}  // namespace llm4tg::harness
