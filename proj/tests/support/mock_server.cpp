#include "mock_server.hpp"

#include "httplib.h"
#include "json.hpp"

namespace mock {
namespace {

// Thread pool that counts accepted connections (one task per connection).
class CountingQueue : public httplib::TaskQueue {
 public:
  explicit CountingQueue(std::atomic<std::size_t>& counter) : counter_(counter) {}
  bool enqueue(std::function<void()> fn) override {
    ++counter_;
    return pool_.enqueue(std::move(fn));
  }
  void shutdown() override { pool_.shutdown(); }

 private:
  std::atomic<std::size_t>& counter_;
  httplib::ThreadPool pool_{4};
};

}  // namespace

std::string completion(const std::string& text) {
  return nlohmann::json{{"id", "cmpl-test"},
                        {"object", "chat.completion"},
                        {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", text}}}}}}}
      .dump();
}

Server::Server(std::vector<Reply> script) : server_(std::make_unique<httplib::Server>()), script_(std::move(script)) {
  server_->Post(R"(.*)", [this](const httplib::Request& req, httplib::Response& res) {
    Reply reply{500, R"({"error":"script exhausted"})"};
    {
      std::lock_guard lock(mutex_);
      requests_.push_back({req.path, req.get_header_value("Authorization"), req.body, req.remote_addr});
      if (next_ < script_.size()) reply = script_[next_++];
    }
    if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
  server_->new_task_queue = [this] { return new CountingQueue(connections_); };
  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

Server::~Server() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string Server::base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

std::vector<Request> Server::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::size_t Server::connections() const { return connections_.load(); }

}  // namespace mock
