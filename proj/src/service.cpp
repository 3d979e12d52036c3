#include "pcsmaa/service.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <random>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <httplib.h>

#include "pcsmaa/result_io.hpp"
#include "pcsmaa/spantree.hpp"

namespace pcsmaa {

namespace {

Json violation_json(const Violation& v) {
  return {{"code", std::string(to_string(v.code))},
          {"matrix", v.matrix},
          {"row", v.row},
          {"col", v.col},
          {"message", v.message}};
}

Json error_body(Errc code, const std::string& message, const std::vector<Violation>& violations = {}) {
  Json body{{"error", std::string(to_string(code))}, {"message", message}};
  if (!violations.empty()) {
    body["violations"] = Json::array();
    for (const auto& v : violations) body["violations"].push_back(violation_json(v));
  }
  return body;
}

Json matrix_state(const std::string& key, const JudgementTable& table) {
  Json doc;
  doc["key"] = key;
  doc["size"] = table.size();
  doc["judgements"] = table.judgement_count();
  doc["complete"] = table.is_complete();
  const bool connected = table.is_connected();
  doc["connected"] = connected;
  doc["tree_count"] = big_to_json(count_trees(to_graph(table)));
  doc["consistency_ratio"] = nullptr;
  doc["transitivity_violations"] = nullptr;
  if (connected) {
    const PairwiseMatrix matrix(table);
    if (table.is_complete() && table.size() >= 3 && table.size() <= 10) {
      doc["consistency_ratio"] = round6(consistency_ratio(matrix));
    }
    Json triads = Json::array();
    for (const auto& t : check_transitivity(matrix)) triads.push_back(Json::array({t.first, t.second, t.third}));
    doc["transitivity_violations"] = std::move(triads);
  }
  return doc;
}

std::string now_iso() {
  const auto now = std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z", now);
}

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 engine{std::random_device{}()};
  std::lock_guard lock(mutex);
  return fmt::format("{:016x}", engine());
}

std::optional<Index> parse_index(const std::string& text) {
  Index value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

bool active(const std::string& status) { return status == "queued" || status == "running"; }

}  // namespace

Json validation_state(const ProblemDraft& draft) {
  Json doc;
  const auto violations = draft.connectivity_violations();
  doc["draft"] = !violations.empty();
  doc["violations"] = Json::array();
  for (const auto& v : violations) doc["violations"].push_back(violation_json(v));
  doc["matrices"] = Json::array();
  BigInt space = count_trees(to_graph(draft.weight_table));
  for (std::size_t c = 0; c < draft.criteria.size(); ++c) {
    doc["matrices"].push_back(matrix_state(draft.criteria[c], draft.criterion_tables[c]));
    space *= count_trees(to_graph(draft.criterion_tables[c]));
  }
  doc["matrices"].push_back(matrix_state(kWeightsKey, draft.weight_table));
  doc["total_space"] = big_to_json(space);
  return doc;
}

struct SessionService::Job {
  std::string mode;  // requested: auto, enumerate or sample
  std::string status = "queued";
  double progress = 0.0;
  std::string error;
  Json request;
  Json result;  // null until done

  Json summary(const std::string& id) const {
    return {{"id", id},
            {"mode", mode},
            {"status", status},
            {"progress", round6(progress)},
            {"error", error.empty() ? Json(nullptr) : Json(error)}};
  }
};

struct SessionService::Session {
  std::mutex mutex;
  std::string id;
  ProblemDraft draft;
  Json history = Json::array();
  std::map<std::string, Job> jobs;
  std::uint64_t next_job = 1;

  Json to_document() const {
    Json doc;
    doc["id"] = id;
    doc["problem"] = to_json(draft);
    doc["history"] = history;
    doc["next_job"] = next_job;
    doc["jobs"] = Json::object();
    for (const auto& [job_id, job] : jobs) {
      auto j = job.summary(job_id);
      j["request"] = job.request;
      j["result"] = job.result;
      doc["jobs"][job_id] = std::move(j);
    }
    return doc;
  }

  Json view() const {
    Json doc;
    doc["id"] = id;
    doc["problem"] = to_json(draft);
    doc["validation"] = validation_state(draft);
    doc["history"] = history;
    doc["jobs"] = Json::array();
    for (const auto& [job_id, job] : jobs) doc["jobs"].push_back(job.summary(job_id));
    return doc;
  }

  std::optional<std::string> running_job() const {
    for (const auto& [job_id, job] : jobs) {
      if (active(job.status)) return job_id;
    }
    return std::nullopt;
  }

  JudgementTable* table(const std::string& key) {
    if (key == kWeightsKey) return &draft.weight_table;
    for (std::size_t c = 0; c < draft.criteria.size(); ++c) {
      if (draft.criteria[c] == key) return &draft.criterion_tables[c];
    }
    return nullptr;
  }
};

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
  std::filesystem::create_directories(config_.data_dir);
  load_all();
  const unsigned threads = std::max(1u, config_.job_threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers_.emplace_back([this](std::stop_token stop) { worker_loop(stop); });
  }
}

SessionService::~SessionService() {
  for (auto& w : workers_) w.request_stop();
  queue_cv_.notify_all();
  workers_.clear();
}

void SessionService::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };

  server.Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_session(req.body));
  });
  server.Get(R"(/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_session(req.matches[1]));
  });
  const char* entry = R"(/sessions/([^/]+)/matrices/([^/]+)/entries/([^/]+)/([^/]+))";
  server.Put(entry, [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, edit_entry(req.matches[1], req.matches[2],
                         req.matches[3], req.matches[4], req.body));
  });
  server.Delete(entry, [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, edit_entry(req.matches[1], req.matches[2],
                         req.matches[3], req.matches[4], std::nullopt));
  });
  server.Post(R"(/sessions/([^/]+)/jobs)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, start_job(req.matches[1], req.body));
  });
  server.Get(R"(/sessions/([^/]+)/jobs/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_job(req.matches[1], req.matches[2]));
  });
  server.Get(R"(/sessions/([^/]+)/results/([^/]+))",
             [this, send](const httplib::Request& req, httplib::Response& res) {
               send(res, get_result(req.matches[1], req.matches[2]));
             });
  if (config_.static_dir) server.set_mount_point("/", config_.static_dir->string());
}

SessionService::Reply SessionService::create_session(const std::string& body) {
  Json document;
  try {
    document = Json::parse(body);
  } catch (const Json::exception& e) {
    return {400, error_body(Errc::Schema, std::string("request body is not JSON: ") + e.what())};
  }

  ProblemDraft draft;
  try {
    draft = parse_problem_draft(document);
  } catch (const ValidationError& e) {
    return {400, error_body(e.code(), e.what(), e.violations())};
  } catch (const Error& e) {
    return {400, error_body(e.code(), e.what())};
  }
  for (const auto& c : draft.criteria) {
    if (c == kWeightsKey) {
      return {400, error_body(Errc::Schema, "criterion name 'weights' is reserved")};
    }
  }

  auto session = std::make_shared<Session>();
  session->id = new_session_id();
  session->draft = std::move(draft);
  session->history.push_back({{"at", now_iso()}, {"action", "create"}});
  persist(*session);

  Json reply{{"id", session->id}, {"validation", validation_state(session->draft)}};
  reply["draft"] = reply["validation"]["draft"];
  std::lock_guard lock(store_mutex_);
  sessions_[session->id] = session;
  return {201, std::move(reply)};
}

SessionService::Reply SessionService::get_session(const std::string& id) {
  auto session = find(id);
  if (!session) return {404, error_body(Errc::Schema, "unknown session '" + id + "'")};
  std::lock_guard lock(session->mutex);
  return {200, session->view()};
}

SessionService::Reply SessionService::edit_entry(const std::string& id, const std::string& key,
                                                 const std::string& row, const std::string& col,
                                                 const std::optional<std::string>& body) {
  auto session = find(id);
  if (!session) return {404, error_body(Errc::Schema, "unknown session '" + id + "'")};

  const auto r = parse_index(row);
  const auto c = parse_index(col);
  if (!r || !c) return {422, error_body(Errc::IndexOutOfRange, "indices must be non-negative integers")};

  std::optional<Rational> value;
  if (body) {
    try {
      const auto document = Json::parse(*body);
      if (!document.is_object() || !document.contains("value")) {
        return {422, error_body(Errc::Schema, "body must be an object with a 'value' field")};
      }
      value = judgement_from_json(document["value"]);
    } catch (const Json::exception& e) {
      return {422, error_body(Errc::Schema, std::string("request body is not JSON: ") + e.what())};
    } catch (const Error& e) {
      return {422, error_body(e.code(), e.what())};
    }
  }

  std::lock_guard lock(session->mutex);
  JudgementTable* table = session->table(key);
  if (!table) return {404, error_body(Errc::Schema, "unknown matrix '" + key + "'")};
  try {
    if (value) {
      table->set(*r, *c, *value);
    } else {
      table->clear(*r, *c);
    }
  } catch (const Error& e) {
    return {422, error_body(e.code(), e.what())};
  }

  session->history.push_back({{"at", now_iso()},
                              {"action", value ? "set" : "clear"},
                              {"matrix", key},
                              {"row", *r},
                              {"col", *c},
                              {"value", judgement_to_json(value)}});
  persist(*session);
  return {200, validation_state(session->draft)};
}

SessionService::Reply SessionService::start_job(const std::string& id, const std::string& body) {
  auto session = find(id);
  if (!session) return {404, error_body(Errc::Schema, "unknown session '" + id + "'")};

  Json request = Json::object();
  if (!body.empty()) {
    try {
      request = Json::parse(body);
    } catch (const Json::exception& e) {
      return {422, error_body(Errc::Schema, std::string("request body is not JSON: ") + e.what())};
    }
    if (!request.is_object()) return {422, error_body(Errc::Schema, "request body must be an object")};
  }

  const std::string mode = request.value("mode", std::string("auto"));
  if (mode != "auto" && mode != "enumerate" && mode != "sample") {
    return {422, error_body(Errc::BadPlan, "mode must be auto, enumerate or sample")};
  }

  std::lock_guard lock(session->mutex);
  if (auto running = session->running_job()) {
    Json reply = error_body(Errc::BadPlan, "a job is already running on this session");
    reply["job_id"] = *running;
    return {409, std::move(reply)};
  }

  std::optional<Problem> problem;
  try {
    problem = to_problem(session->draft);
  } catch (const ValidationError& e) {
    return {409, error_body(e.code(), "problem is still a draft", e.violations())};
  }

  bool enumerate = mode == "enumerate";
  std::optional<SamplePlan> plan;
  try {
    const BigInt space = total_space(*problem);
    if (mode == "auto") enumerate = space <= config_.enumeration_cap;
    if (enumerate && space > config_.enumeration_cap) {
      throw Error(Errc::SpaceTooLarge,
                  fmt::format("{} combinations exceed the enumeration cap of {}", space.str(),
                              config_.enumeration_cap));
    }
    if (!enumerate) {
      std::optional<double> z;
      if (request.contains("z") && !request["z"].is_null()) z = request["z"].get<double>();
      std::optional<std::uint64_t> iterations;
      if (request.contains("iterations") && !request["iterations"].is_null()) {
        const auto n = request["iterations"].get<std::int64_t>();
        if (n <= 0) throw Error(Errc::BadPlan, "iterations must be positive");
        iterations = static_cast<std::uint64_t>(n);
      }
      plan = make_plan(request.value("accuracy", 0.01), request.value("confidence", 99.0), z,
                       request.value("seed", std::uint64_t{0}), iterations);
    }
  } catch (const Json::exception& e) {
    return {422, error_body(Errc::BadPlan, std::string("invalid plan field: ") + e.what())};
  } catch (const Error& e) {
    return {422, error_body(e.code(), e.what())};
  }

  const std::string job_id = fmt::format("job-{:04}", session->next_job++);
  Job& job = session->jobs[job_id];
  job.mode = mode;
  job.request = request;
  persist(*session);

  enqueue([this, session, job_id, problem = std::move(*problem), plan, enumerate]() {
    {
      std::lock_guard lock(session->mutex);
      session->jobs[job_id].status = "running";
    }
    RunOptions options;
    options.workers = config_.analysis_workers;
    options.cap = config_.enumeration_cap;
    options.progress = [&](double fraction) {
      std::lock_guard lock(session->mutex);
      session->jobs[job_id].progress = fraction;
    };
    Json result;
    std::string error;
    try {
      result = to_json(enumerate ? acceptability_enumerate(problem, options)
                                 : acceptability_sample(problem, *plan, options));
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard lock(session->mutex);
    Job& done = session->jobs[job_id];
    if (error.empty()) {
      done.status = "done";
      done.progress = 1.0;
      done.result = std::move(result);
    } else {
      done.status = "failed";
      done.error = error;
    }
    persist(*session);
  });

  return {202, {{"job_id", job_id}}};
}

SessionService::Reply SessionService::get_job(const std::string& id, const std::string& job_id) {
  auto session = find(id);
  if (!session) return {404, error_body(Errc::Schema, "unknown session '" + id + "'")};
  std::lock_guard lock(session->mutex);
  const auto it = session->jobs.find(job_id);
  if (it == session->jobs.end()) return {404, error_body(Errc::Schema, "unknown job '" + job_id + "'")};
  return {200, it->second.summary(job_id)};
}

SessionService::Reply SessionService::get_result(const std::string& id, const std::string& job_id) {
  auto session = find(id);
  if (!session) return {404, error_body(Errc::Schema, "unknown session '" + id + "'")};
  std::lock_guard lock(session->mutex);
  const auto it = session->jobs.find(job_id);
  if (it == session->jobs.end()) return {404, error_body(Errc::Schema, "unknown job '" + job_id + "'")};
  const Job& job = it->second;
  if (job.status != "done") {
    Json body = error_body(Errc::BadPlan, "job is " + job.status);
    body["status"] = job.status;
    return {409, std::move(body)};
  }
  return {200, job.result};
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) {
  std::lock_guard lock(store_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

// Caller holds session.mutex (or owns the session exclusively).
void SessionService::persist(const Session& session) const {
  const auto path = config_.data_dir / (session.id + ".json");
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << session.to_document().dump(2) << '\n';
    if (!out) throw Error(Errc::Schema, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void SessionService::load_all() {
  for (const auto& entry : std::filesystem::directory_iterator(config_.data_dir)) {
    if (entry.path().extension() != ".json") continue;
    const Json doc = read_json_file(entry.path());
    auto session = std::make_shared<Session>();
    session->id = doc.at("id").get<std::string>();
    session->draft = parse_problem_draft(doc.at("problem"));
    session->history = doc.at("history");
    session->next_job = doc.at("next_job").get<std::uint64_t>();
    bool interrupted = false;
    for (const auto& [job_id, j] : doc.at("jobs").items()) {
      Job job;
      job.mode = j.at("mode").get<std::string>();
      job.status = j.at("status").get<std::string>();
      job.progress = j.at("progress").get<double>();
      if (!j.at("error").is_null()) job.error = j["error"].get<std::string>();
      job.request = j.at("request");
      job.result = j.at("result");
      if (active(job.status)) {
        job.status = "failed";
        job.error = "interrupted by service restart";
        interrupted = true;
      }
      session->jobs.emplace(job_id, std::move(job));
    }
    if (interrupted) persist(*session);
    sessions_[session->id] = std::move(session);
  }
}

void SessionService::enqueue(std::function<void()> task) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(std::move(task));
  }
  queue_cv_.notify_one();
}

void SessionService::wait_idle() {
  std::unique_lock lock(queue_mutex_);
  idle_cv_.wait(lock, [this] { return queue_.empty() && busy_ == 0; });
}

void SessionService::worker_loop(std::stop_token stop) {
  while (true) {
    std::function<void()> task;
    {
      std::unique_lock lock(queue_mutex_);
      if (!queue_cv_.wait(lock, stop, [this] { return !queue_.empty(); })) return;
      task = std::move(queue_.front());
      queue_.pop_front();
      ++busy_;
    }
    task();
    {
      std::lock_guard lock(queue_mutex_);
      --busy_;
    }
    idle_cv_.notify_all();
  }
}

}  // namespace pcsmaa
