#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "drxp/oracle.hpp"

namespace drxp {

/// Client side of the line-delimited JSON oracle protocol. Launches the
/// command through /bin/sh, performs the init handshake, then multiplexes
/// concurrent check requests by id over the child's stdin/stdout.
class ExternalOracle final : public Oracle {
 public:
  struct Options {
    std::chrono::milliseconds checkTimeout{std::chrono::seconds(300)};
    std::chrono::milliseconds handshakeTimeout{std::chrono::seconds(30)};
  };

  ExternalOracle(const std::string& command, ExplanationProblem problem, Norm norm, Options options);
  ExternalOracle(const std::string& command, ExplanationProblem problem, Norm norm)
      : ExternalOracle(command, std::move(problem), norm, Options{}) {}
  ~ExternalOracle() override;

  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  /// Witnesses are re-verified locally; an invalid witness, a malformed
  /// response, a dead child or a timeout raise OracleFailure.
  OracleVerdict findAdvEx(const OracleQuery& query, std::stop_token stop = {}) override;
  OracleTraits traits() const override { return {"external", false, true}; }
  std::size_t featureCount() const override;

  /// Sends shutdown and closes the stream; pending calls fail.
  void shutdown();

 private:
  struct Session;
  std::unique_ptr<Session> session_;
};

/// Environment variable naming the oracle command used by the CLI.
inline constexpr const char* kOracleCommandEnv = "DRXP_ORACLE_CMD";

}  // namespace drxp
