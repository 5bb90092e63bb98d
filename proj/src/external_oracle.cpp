#include "drxp/external_oracle.hpp"

#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <csignal>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"

#include "drxp/errors.hpp"
#include "drxp/model_io.hpp"

namespace drxp {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

json normToWire(Norm norm) {
  switch (norm) {
    case Norm::L0: return 0;
    case Norm::L1: return 1;
    case Norm::L2: return 2;
    case Norm::Linf: return "inf";
  }
  return 1;
}

}  // namespace

struct ExternalOracle::Session {
  ExplanationProblem problem;
  Norm norm;
  Options options;
  pid_t pid = -1;
  int fd = -1;

  std::mutex mu;
  std::condition_variable_any cv;
  std::mutex writeMu;
  std::map<std::int64_t, std::optional<json>> pending;
  std::int64_t nextId = 1;
  std::optional<json> handshake;
  std::optional<std::string> dead;  // reason the stream is unusable
  bool closing = false;
  std::jthread reader;

  Session(ExplanationProblem p, Norm n, Options o) : problem(std::move(p)), norm(n), options(o) {}

  void fail(std::string reason) {
    std::lock_guard lock(mu);
    if (!dead) dead = closing ? "oracle session closed" : std::move(reason);
    cv.notify_all();
  }

  void send(const json& record) {
    std::string line = record.dump() + "\n";
    std::lock_guard lock(writeMu);
    const char* p = line.data();
    std::size_t left = line.size();
    while (left > 0) {
      const auto n = ::send(fd, p, left, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("oracle process stream closed");
        throw OracleFailure("cannot write to oracle process");
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
  }

  void dispatch(const std::string& line) {
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception&) {
      fail("malformed record from oracle: " + line.substr(0, 200));
      return;
    }
    if (!rec.is_object() || !rec.contains("type") || !rec["type"].is_string()) {
      fail("record without type from oracle");
      return;
    }
    const auto type = rec["type"].get<std::string>();
    std::lock_guard lock(mu);
    if (rec.contains("id")) {
      if (!rec["id"].is_number_integer()) {
        if (!dead) dead = "non-integer id from oracle";
      } else {
        auto it = pending.find(rec["id"].get<std::int64_t>());
        // Unknown ids are late answers to abandoned calls; duplicates lose.
        if (it != pending.end() && !it->second) it->second = std::move(rec);
      }
    } else if (type == "ready" || type == "error") {
      if (!handshake) {
        handshake = std::move(rec);
      } else if (!dead) {
        dead = "oracle error: " + rec.value("msg", std::string("unspecified"));
      }
    } else if (!dead) {
      dead = "unexpected record type '" + type + "' from oracle";
    }
    cv.notify_all();
  }

  void readLoop() {
    std::string buf;
    char chunk[4096];
    for (;;) {
      const auto n = ::read(fd, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      buf.append(chunk, static_cast<std::size_t>(n));
      std::size_t pos;
      while ((pos = buf.find('\n')) != std::string::npos) {
        std::string line = buf.substr(0, pos);
        buf.erase(0, pos + 1);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        dispatch(line);
      }
    }
    fail("oracle process exited");
  }

  void terminate() {
    {
      std::lock_guard lock(mu);
      closing = true;
    }
    if (fd >= 0) {
      try {
        if (!dead) send({{"type", "shutdown"}});
      } catch (const OracleFailure&) {
      }
      ::shutdown(fd, SHUT_WR);
    }
    if (pid > 0) {
      int status = 0;
      const auto deadline = Clock::now() + std::chrono::seconds(2);
      while (::waitpid(pid, &status, WNOHANG) == 0) {
        if (Clock::now() > deadline) {
          ::kill(pid, SIGKILL);
          ::waitpid(pid, &status, 0);
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
      pid = -1;
    }
    if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
    if (reader.joinable()) reader.join();
    if (fd >= 0) {
      ::close(fd);
      fd = -1;
    }
    fail("oracle session closed");
  }
};

ExternalOracle::ExternalOracle(const std::string& command, ExplanationProblem problem, Norm norm,
                               Options options)
    : session_(std::make_unique<Session>(std::move(problem), norm, options)) {
  auto& s = *session_;
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw OracleFailure("socketpair failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw OracleFailure("fork failed");
  }
  if (pid == 0) {
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(sv[1]);
  s.pid = pid;
  s.fd = sv[0];
  s.reader = std::jthread([&s] { s.readLoop(); });

  const auto& cp = s.problem.problem();
  const auto& inst = s.problem.instance();
  json init = {{"type", "init"},
               {"protocol", 1},
               {"model", modelToJson(cp)},
               {"instance", {{"point", pointToJson(inst.point, cp)}, {"label", cp.classes()[inst.label]}}},
               {"norm", normToWire(norm)}};
  try {
    s.send(init);
    std::unique_lock lock(s.mu);
    const bool answered = s.cv.wait_for(lock, s.options.handshakeTimeout,
                                        [&s] { return s.handshake.has_value() || s.dead.has_value(); });
    if (!answered) throw OracleFailure("oracle handshake timed out");
    if (!s.handshake) throw OracleFailure("oracle handshake failed: " + *s.dead);
    if ((*s.handshake)["type"] != "ready") {
      throw OracleFailure("oracle rejected init: " + s.handshake->value("msg", std::string("unspecified")));
    }
  } catch (...) {
    s.terminate();
    throw;
  }
}

ExternalOracle::~ExternalOracle() {
  if (session_) session_->terminate();
}

std::size_t ExternalOracle::featureCount() const { return session_->problem.problem().featureCount(); }

void ExternalOracle::shutdown() { session_->terminate(); }

OracleVerdict ExternalOracle::findAdvEx(const OracleQuery& query, std::stop_token stop) {
  auto& s = *session_;
  checkQuery(query, featureCount());
  if (query.norm != s.norm) {
    throw Unsupported("external oracle session was initialised for norm " + std::string(normName(s.norm)));
  }
  std::int64_t id;
  {
    std::lock_guard lock(s.mu);
    if (s.dead) throw OracleFailure(*s.dead);
    id = s.nextId++;
    s.pending.emplace(id, std::nullopt);
  }
  auto forget = [&s, id] {
    std::lock_guard lock(s.mu);
    s.pending.erase(id);
  };
  try {
    s.send({{"type", "check"}, {"id", id}, {"fixed", query.fixed.members()}, {"epsilon", query.epsilon}});
  } catch (...) {
    forget();
    throw;
  }

  std::unique_lock lock(s.mu);
  const auto deadline = Clock::now() + s.options.checkTimeout;
  const bool ready = s.cv.wait_until(lock, stop, deadline,
                                     [&s, id] { return s.pending.at(id).has_value() || s.dead.has_value(); });
  json rec;
  if (ready && s.pending.at(id)) {
    rec = std::move(*s.pending.at(id));
    s.pending.erase(id);
  } else {
    const bool dead = s.dead.has_value();
    const std::string reason = dead ? *s.dead : "";
    s.pending.erase(id);
    lock.unlock();
    if (dead) throw OracleFailure(reason);
    try {
      s.send({{"type", "cancel"}, {"id", id}});
    } catch (const OracleFailure&) {
    }
    if (stop.stop_requested()) return OracleVerdict::cancelled();
    throw OracleFailure("oracle check " + std::to_string(id) + " timed out");
  }
  lock.unlock();

  const auto type = rec.value("type", std::string());
  if (type == "error") throw OracleFailure("oracle error: " + rec.value("msg", std::string("unspecified")));
  if (type != "result" || !rec.contains("status") || !rec["status"].is_string()) {
    throw OracleFailure("malformed oracle result for id " + std::to_string(id));
  }
  const auto status = rec["status"].get<std::string>();
  if (status == "robust") return OracleVerdict::robust();
  if (status == "adv") {
    if (!rec.contains("witness")) throw OracleFailure("adv result without witness");
    Point witness;
    try {
      witness = pointFromJson(rec["witness"], s.problem.problem(), "witness");
      if (!verifyWitness(s.problem, witness, query)) throw OracleFailure("oracle returned an invalid witness");
    } catch (const OracleFailure&) {
      throw;
    } catch (const Error& e) {
      throw OracleFailure(std::string("oracle returned an invalid witness: ") + e.what());
    }
    return OracleVerdict::adv(std::move(witness));
  }
  if (status == "cancelled") {
    if (stop.stop_requested()) return OracleVerdict::cancelled();
    throw OracleFailure("oracle cancelled a check that was not cancelled");
  }
  throw OracleFailure("unknown oracle status '" + status + "'");
}

}  // namespace drxp
