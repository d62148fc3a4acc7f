#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace mock {

struct Reply {
  int status = 200;
  std::string body;
  std::chrono::milliseconds delay{0};
};

/// Chat-completions body with one choice carrying `text`.
std::string completion(const std::string& text);

struct Request {
  std::string path;
  std::string authorization;
  std::string body;
  std::string remote_addr;
};

/// Loopback HTTP server answering POSTs from a script; once the script is
/// used up it answers 500.
class Server {
 public:
  explicit Server(std::vector<Reply> script);
  ~Server();

  std::string base_url() const;  // http://127.0.0.1:<port>/v1
  int port() const { return port_; }
  std::vector<Request> requests() const;
  std::size_t connections() const;  // TCP connections accepted

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mutex_;
  std::vector<Reply> script_;
  std::size_t next_ = 0;
  std::vector<Request> requests_;
  std::atomic<std::size_t> connections_{0};
};

}  // namespace mock
