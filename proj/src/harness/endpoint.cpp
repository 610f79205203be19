#include "llm4tg/harness/endpoint.hpp"

#include <httplib.h>

#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "llm4tg/errors.hpp"

namespace llm4tg::harness {

RateLimiter::RateLimiter(int per_minute, std::chrono::milliseconds window)
    : per_minute_(per_minute), window_(window) {}

void RateLimiter::acquire() {
  if (per_minute_ <= 0) return;
  std::unique_lock lock(mutex_);
  while (true) {
    const auto now = std::chrono::steady_clock::now();
    while (!recent_.empty() && now - recent_.front() >= window_) recent_.pop_front();
    if (static_cast<int>(recent_.size()) < per_minute_) {
      recent_.push_back(now);
      return;
    }
    const auto wait = recent_.front() + window_ - now;
    lock.unlock();
    std::this_thread::sleep_for(wait);
    lock.lock();
  }
}

HttpModelClient::HttpModelClient(ModelEndpoint endpoint)
    : endpoint_(std::move(endpoint)),
      slots_(std::max(endpoint_.parallelism, 1)),
      limiter_(endpoint_.rate_per_minute) {
  if (endpoint_.timeout.count() <= 0) throw std::invalid_argument("endpoint timeout must be positive");
  if (endpoint_.parallelism < 1 || endpoint_.parallelism > 1024) {
    throw std::invalid_argument("endpoint parallelism must be in 1..1024");
  }
  if (endpoint_.max_retries < 0) throw std::invalid_argument("max_retries must be non-negative");
  const char* key = endpoint_.api_key_env.empty() ? nullptr : std::getenv(endpoint_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw AuthError("credential variable '" + endpoint_.api_key_env + "' is not set");
  }
  api_key_ = key;

  const std::size_t scheme = endpoint_.base_url.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("endpoint URL needs a scheme: " + endpoint_.base_url);
  const std::size_t path = endpoint_.base_url.find('/', scheme + 3);
  scheme_host_port_ = endpoint_.base_url.substr(0, path);
  path_prefix_ = path == std::string::npos ? "" : endpoint_.base_url.substr(path);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

HttpModelClient::~HttpModelClient() = default;

std::string HttpModelClient::complete(const ModelRequest& request) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};

  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_bearer_token_auth(api_key_);

  const nlohmann::json body = {
      {"model", endpoint_.model},
      {"temperature", endpoint_.temperature},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
  };
  const std::string payload = body.dump();
  const std::string path = path_prefix_ + "/chat/completions";

  enum class Failure { Timeout, RateLimit, Transport } last = Failure::Transport;
  std::string detail;
  auto backoff = endpoint_.initial_backoff;
  for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    limiter_.acquire();
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      const auto err = res.error();
      last = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ? Failure::Timeout
                                                                                      : Failure::Transport;
      detail = httplib::to_string(err);
      continue;
    }
    if (res->status == 200) {
      try {
        const auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw TransportError("unexpected response body for " + request.graph_id + ": " + e.what());
      }
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("endpoint rejected the credential (HTTP " + std::to_string(res->status) + ")");
    }
    detail = "HTTP " + std::to_string(res->status);
    if (res->status == 429) {
      last = Failure::RateLimit;
    } else if (res->status >= 500) {
      last = Failure::Transport;
    } else {
      throw TransportError("request for " + request.graph_id + " failed with " + detail);
    }
  }
  const std::string msg = "request for " + request.graph_id + " failed after " +
                          std::to_string(endpoint_.max_retries + 1) + " attempts: " + detail;
  switch (last) {
    case Failure::Timeout: throw TimeoutError(msg);
    case Failure::RateLimit: throw RateLimited(msg);
    case Failure::Transport: break;
  }
  throw TransportError(msg);
}

ScriptedModelClient::ScriptedModelClient(std::map<std::string, std::string> replies, std::string fallback,
                                         std::string model)
    : replies_(std::move(replies)), fallback_(std::move(fallback)), model_(std::move(model)) {}

ScriptedModelClient::ScriptedModelClient(Responder responder, std::string model)
    : responder_(std::move(responder)), model_(std::move(model)) {}

std::string ScriptedModelClient::complete(const ModelRequest& request) {
  {
    std::lock_guard lock(mutex_);
    ++calls_;
  }
  if (responder_) return responder_(request);
  auto it = replies_.find(request.graph_id);
  return it == replies_.end() ? fallback_ : it->second;
}

std::size_t ScriptedModelClient::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::string query(ModelClient& client, const ModelRequest& request) { return client.complete(request); }

}  // namespace llm4tg::harness
