#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pcsmaa/problem_io.hpp"
#include "pcsmaa/smaa.hpp"

namespace httplib {
class Server;
}

namespace pcsmaa {

struct ServiceConfig {
  std::filesystem::path data_dir = "sessions";
  std::optional<std::filesystem::path> static_dir;
  unsigned job_threads = 1;       // concurrent analysis jobs
  unsigned analysis_workers = 1;  // threads per job
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

// Per-matrix validity feedback for incremental editing.
Json validation_state(const ProblemDraft& draft);

// Key addressing the criteria-weight matrix in URLs and validation output.
inline constexpr const char* kWeightsKey = "weights";

// Problem sessions persisted as one JSON document per session under
// config.data_dir, plus background analysis jobs.
//
//   POST   /sessions
//   GET    /sessions/{id}
//   PUT    /sessions/{id}/matrices/{key}/entries/{r}/{c}   body {"value": 4 | "1/4" | null}
//   DELETE /sessions/{id}/matrices/{key}/entries/{r}/{c}
//   POST   /sessions/{id}/jobs                             body {"mode": ..., plan fields}
//   GET    /sessions/{id}/jobs/{jobId}
//   GET    /sessions/{id}/results/{jobId}
//
// Row and column indices are 0-based. Matrix keys are criterion names, or
// "weights" for the criteria-weight matrix.
class SessionService {
 public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  void mount(httplib::Server& server);

  // Blocks until no job is queued or running.
  void wait_idle();

 private:
  struct Job;
  struct Session;
  struct Reply {
    int status = 200;
    Json body;
  };

  Reply create_session(const std::string& body);
  Reply get_session(const std::string& id);
  Reply edit_entry(const std::string& id, const std::string& key, const std::string& row,
                   const std::string& col, const std::optional<std::string>& body);
  Reply start_job(const std::string& id, const std::string& body);
  Reply get_job(const std::string& id, const std::string& job_id);
  Reply get_result(const std::string& id, const std::string& job_id);

  std::shared_ptr<Session> find(const std::string& id);
  void persist(const Session& session) const;
  void load_all();
  void enqueue(std::function<void()> task);
  void worker_loop(std::stop_token stop);

  ServiceConfig config_;
  std::mutex store_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;

  std::mutex queue_mutex_;
  std::condition_variable_any queue_cv_;
  std::deque<std::function<void()>> queue_;
  std::size_t busy_ = 0;
  std::condition_variable_any idle_cv_;
  std::vector<std::jthread> workers_;
};

}  // namespace pcsmaa
