//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_PROBLEMS_EXTERNAL_HPP
#define AEROBENCH_PROBLEMS_EXTERNAL_HPP

#include <condition_variable>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "aerobench/problems/problem.hpp"

namespace aerobench::problems {

inline constexpr int kExternalProtocol = 1;

/// The evaluator rejected or garbled the handshake.
class HandshakeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExternalOptions {
  std::vector<std::string> argv;
  int dim = 0;
  int n_con = 0;
  double timeout_s = 30.0;
};

/// Splits a command line on whitespace, honouring single and double quotes.
std::vector<std::string> split_command(const std::string &cmd);

/// One evaluator process speaking newline-delimited JSON on its standard
/// streams. The process is started lazily and restarted after it dies,
/// times out or garbles a reply. One request at a time.
class ExternalClient {
public:
  explicit ExternalClient(ExternalOptions options);
  ~ExternalClient();
  ExternalClient(const ExternalClient &) = delete;
  ExternalClient &operator=(const ExternalClient &) = delete;

  /// Spawns the process (if needed) and performs the handshake. Throws
  /// HandshakeError on rejection or protocol violations, std::runtime_error
  /// when the process cannot be started.
  void start();

  /// Sends `x_phys` and returns the raw responses. Process trouble yields a
  /// failed result with a diagnostic; it never throws except for handshake
  /// errors on a (re)start.
  EvaluationResult evaluate(const Vec &x_phys);

  bool running() const noexcept { return pid_ > 0; }
  int restarts() const noexcept { return restarts_; }

private:
  void stop();
  bool send_line(const std::string &line, std::string &err);
  bool read_line(std::string &line, std::string &err);

  ExternalOptions opt_;
  int pid_ = -1;
  int fd_ = -1;
  long next_id_ = 0;
  int restarts_ = 0;
  std::string buffer_;
};

/// A fixed set of clients shared by concurrent callers.
class ExternalPool {
public:
  ExternalPool(ExternalOptions options, int size);

  EvaluationResult evaluate(const Vec &x_phys);

private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::unique_ptr<ExternalClient>> clients_;
  std::vector<bool> busy_;
};

/// Backend forwarding normalized designs to an evaluator pool in physical
/// units; objective gradients are mapped back to normalized units.
Backend external_backend(std::shared_ptr<ExternalPool> pool, BoxNormalizer box);

}  // namespace aerobench::problems

#endif  // AEROBENCH_PROBLEMS_EXTERNAL_HPP
