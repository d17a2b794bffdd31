//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/problems/external.hpp"

#include <chrono>
#include <cstring>

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

extern char **environ;

namespace aerobench::problems {
namespace {
  using json = nlohmann::json;
  using Clock = std::chrono::steady_clock;

  Vec to_vec(const json &a) {
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
  }
}  // namespace

std::vector<std::string> split_command(const std::string &cmd) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (char ch: cmd) {
    if (quote) {
      if (ch == quote)
        quote = 0;
      else
        cur += ch;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      in_token = true;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      if (in_token)
        out.push_back(cur), cur.clear(), in_token = false;
    } else {
      cur += ch;
      in_token = true;
    }
  }
  require(quote == 0, "unterminated quote in command '" + cmd + "'");
  if (in_token)
    out.push_back(cur);
  return out;
}

ExternalClient::ExternalClient(ExternalOptions options)
    : opt_(std::move(options)) {
  require(!opt_.argv.empty(), "external evaluator: empty command");
  require(opt_.dim > 0 && opt_.n_con >= 0,
          "external evaluator: bad dimensions");
  require(opt_.timeout_s > 0.0, "external evaluator: timeout must be positive");
}

ExternalClient::~ExternalClient() { stop(); }

void ExternalClient::stop() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
  buffer_.clear();
}

void ExternalClient::start() {
  if (pid_ > 0)
    return;
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
    throw std::runtime_error(std::string("socketpair: ") + std::strerror(errno));

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, sv[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&fa, sv[1], STDOUT_FILENO);
  std::vector<char *> argv;
  for (auto &a: opt_.argv)
    argv.push_back(const_cast<char *>(a.c_str()));
  argv.push_back(nullptr);
  pid_t pid = -1;
  const int rc =
      ::posix_spawnp(&pid, argv[0], &fa, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  ::close(sv[1]);
  if (rc != 0) {
    ::close(sv[0]);
    throw std::runtime_error("cannot start evaluator '" + opt_.argv[0]
                             + "': " + std::strerror(rc));
  }
  pid_ = pid;
  fd_ = sv[0];

  std::string err, reply;
  const json hello = { { "proto", kExternalProtocol },
                       { "dim", opt_.dim },
                       { "n_con", opt_.n_con } };
  if (!send_line(hello.dump(), err) || !read_line(reply, err)) {
    stop();
    throw HandshakeError("evaluator handshake failed: " + err);
  }
  json r = json::parse(reply, nullptr, false);
  if (r.is_discarded() || !r.is_object() || !r.contains("ok")
      || !r["ok"].is_boolean() || !r["ok"].get<bool>()) {
    stop();
    std::string why = reply;
    if (!r.is_discarded() && r.is_object() && r.contains("error"))
      why = r["error"].dump();
    throw HandshakeError("evaluator rejected handshake: " + why);
  }
}

bool ExternalClient::send_line(const std::string &line, std::string &err) {
  std::string msg = line + "\n";
  std::size_t off = 0;
  while (off < msg.size()) {
    const ssize_t n =
        ::send(fd_, msg.data() + off, msg.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      err = std::string("write failed: ") + std::strerror(errno);
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

bool ExternalClient::read_line(std::string &line, std::string &err) {
  const auto deadline =
      Clock::now()
      + std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double>(opt_.timeout_s));
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return true;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - Clock::now())
                          .count();
    if (left <= 0) {
      err = "timed out after " + std::to_string(opt_.timeout_s) + " s";
      return false;
    }
    pollfd p{ fd_, POLLIN, 0 };
    const int pr = ::poll(&p, 1, static_cast<int>(left));
    if (pr < 0) {
      if (errno == EINTR)
        continue;
      err = std::string("poll failed: ") + std::strerror(errno);
      return false;
    }
    if (pr == 0)
      continue;
    char buf[4096];
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      err = std::string("read failed: ") + std::strerror(errno);
      return false;
    }
    if (n == 0) {
      err = "evaluator process closed its output (exited?)";
      return false;
    }
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

EvaluationResult ExternalClient::evaluate(const Vec &x_phys) {
  require(x_phys.size() == opt_.dim, "external evaluate: dimension mismatch");
  if (pid_ <= 0) {
    if (next_id_ == 0) {
      start();
    } else {
      // A restart after a crash; a broken restart is one more failed
      // evaluation, not a reason to abort the caller.
      ++restarts_;
      try {
        start();
      } catch (const std::exception &e) {
        ++next_id_;
        return EvaluationResult::failure(std::string("external evaluator: ")
                                         + e.what());
      }
    }
  }
  const long id = next_id_++;
  json req = { { "id", id }, { "x", std::vector<double>(x_phys.data(),
                                                        x_phys.data()
                                                            + x_phys.size()) } };
  std::string err, reply;
  if (!send_line(req.dump(), err) || !read_line(reply, err)) {
    stop();
    return EvaluationResult::failure("external evaluator: " + err);
  }
  const json r = json::parse(reply, nullptr, false);
  auto malformed = [&](const std::string &why) {
    // The stream can no longer be trusted; start afresh next time.
    stop();
    return EvaluationResult::failure("external evaluator: malformed reply ("
                                     + why + ")");
  };
  if (r.is_discarded() || !r.is_object())
    return malformed("not a JSON object");
  if (!r.contains("id") || !r["id"].is_number_integer()
      || r["id"].get<long>() != id)
    return malformed("id mismatch");
  if (!r.contains("status") || !r["status"].is_string())
    return malformed("missing status");
  const auto status = r["status"].get<std::string>();
  if (status == "failed")
    return EvaluationResult::failure(
        r.contains("reason") && r["reason"].is_string()
            ? r["reason"].get<std::string>()
            : std::string("evaluator reported failure"));
  if (status != "ok")
    return malformed("unknown status '" + status + "'");
  try {
    if (!r.contains("f") || !r["f"].is_number())
      return malformed("missing f");
    Vec c(0);
    if (r.contains("c")) {
      if (!r["c"].is_array())
        return malformed("c is not an array");
      c = to_vec(r["c"]);
    }
    std::optional<Vec> g;
    if (r.contains("grad_f") && r["grad_f"].is_array())
      g = to_vec(r["grad_f"]);
    return EvaluationResult::success(r["f"].get<double>(), std::move(c),
                                     std::move(g));
  } catch (const json::exception &e) {
    return malformed(e.what());
  }
}

ExternalPool::ExternalPool(ExternalOptions options, int size) {
  require(size >= 1, "external pool needs at least one client");
  for (int i = 0; i < size; ++i)
    clients_.push_back(std::make_unique<ExternalClient>(options));
  busy_.assign(size, false);
}

EvaluationResult ExternalPool::evaluate(const Vec &x_phys) {
  std::size_t slot = 0;
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] {
      for (std::size_t i = 0; i < busy_.size(); ++i)
        if (!busy_[i]) {
          slot = i;
          return true;
        }
      return false;
    });
    busy_[slot] = true;
  }
  struct Release {
    ExternalPool *p;
    std::size_t s;
    ~Release() {
      {
        std::lock_guard lock(p->mu_);
        p->busy_[s] = false;
      }
      p->cv_.notify_all();
    }
  } release{ this, slot };
  return clients_[slot]->evaluate(x_phys);
}

Backend external_backend(std::shared_ptr<ExternalPool> pool, BoxNormalizer box) {
  return [pool = std::move(pool), box = std::move(box)](const Vec &u,
                                                        bool want_gradient) {
    auto r = pool->evaluate(box.denormalize(u));
    if (r.ok() && r.grad_f) {
      if (want_gradient && r.grad_f->size() == box.dim())
        *r.grad_f = r.grad_f->cwiseProduct(box.hi() - box.lo());
      else
        r.grad_f.reset();
    }
    return r;
  };
}

}  // namespace aerobench::problems
