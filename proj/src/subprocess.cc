// Copyright 2026 The SPIN Summarization Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spin/subprocess.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

extern char** environ;

namespace spin {
namespace {

constexpr std::size_t kStderrTailBytes = 4096;

std::string ErrnoMessage(std::string_view what) {
  return std::string(what) + ": " + std::strerror(errno);
}

void IgnoreSigpipeOnce() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string DescribeStatus(int status) {
  if (WIFEXITED(status)) {
    return "exited with status " + std::to_string(WEXITSTATUS(status));
  }
  if (WIFSIGNALED(status)) {
    return "killed by signal " + std::to_string(WTERMSIG(status));
  }
  return "status " + std::to_string(status);
}

}  // namespace

ChildProcess::ChildProcess(std::vector<std::string> argv)
    : argv_(std::move(argv)) {
  if (argv_.empty() || argv_.front().empty()) {
    throw SubprocessError("empty command");
  }
  IgnoreSigpipeOnce();

  int in_pipe[2];
  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw SubprocessError(ErrnoMessage("pipe"));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw SubprocessError(ErrnoMessage("pipe"));
  }
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
      ::close(fd);
    }
    throw SubprocessError(ErrnoMessage("pipe"));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);

  std::vector<char*> c_argv;
  c_argv.reserve(argv_.size() + 1);
  for (std::string& arg : argv_) c_argv.push_back(arg.data());
  c_argv.push_back(nullptr);

  const int rc = ::posix_spawnp(&pid_, c_argv[0], &actions, nullptr,
                                c_argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    pid_ = -1;
    throw SubprocessError("cannot start '" + argv_.front() +
                          "': " + std::strerror(rc));
  }
  stdin_fd_ = in_pipe[1];
  stdout_fd_ = out_pipe[0];
  stderr_fd_ = err_pipe[0];

  stderr_thread_ = std::thread([this] {
    char buf[1024];
    for (;;) {
      const ssize_t n = ::read(stderr_fd_, buf, sizeof(buf));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      std::lock_guard<std::mutex> lock(stderr_mutex_);
      stderr_tail_.append(buf, static_cast<std::size_t>(n));
      if (stderr_tail_.size() > kStderrTailBytes) {
        stderr_tail_.erase(0, stderr_tail_.size() - kStderrTailBytes);
      }
    }
  });
}

ChildProcess::~ChildProcess() {
  CloseFd(stdin_fd_);
  if (pid_ > 0 && !wait_status_) {
    // Give a well-behaved child a moment to exit on EOF before killing it.
    for (int i = 0; i < 50 && !wait_status_; ++i) {
      Reap(false);
      if (!wait_status_) ::usleep(2000);
    }
    if (!wait_status_) Kill();
  }
  CloseFd(stdout_fd_);
  if (stderr_thread_.joinable()) stderr_thread_.join();
  CloseFd(stderr_fd_);
}

void ChildProcess::CloseFd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

void ChildProcess::Reap(bool block) {
  if (pid_ <= 0 || wait_status_) return;
  int status = 0;
  pid_t rc;
  do {
    rc = ::waitpid(pid_, &status, block ? 0 : WNOHANG);
  } while (rc < 0 && errno == EINTR);
  if (rc == pid_) wait_status_ = status;
}

void ChildProcess::Kill() {
  if (pid_ > 0 && !wait_status_) {
    ::kill(pid_, SIGKILL);
    Reap(true);
  }
}

bool ChildProcess::running() {
  Reap(false);
  return pid_ > 0 && !wait_status_;
}

void ChildProcess::WriteLine(std::string_view line) {
  if (stdin_fd_ < 0) throw SubprocessError("child stdin is closed");
  std::string data(line);
  data.push_back('\n');
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n =
        ::write(stdin_fd_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError(ErrnoMessage("write to child failed"));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> ChildProcess::ReadLine(
    std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    const auto newline = read_buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = read_buffer_.substr(0, newline);
      read_buffer_.erase(0, newline + 1);
      return line;
    }
    if (stdout_fd_ < 0) return std::nullopt;

    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      throw SubprocessError("timed out after " +
                            std::to_string(timeout.count()) +
                            " ms waiting for child response");
    }
    pollfd pfd{stdout_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError(ErrnoMessage("poll"));
    }
    if (ready == 0) continue;

    char buf[8192];
    const ssize_t n = ::read(stdout_fd_, buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError(ErrnoMessage("read from child failed"));
    }
    if (n == 0) {
      CloseFd(stdout_fd_);
      // A trailing unterminated line is dropped; the protocol is
      // newline-framed.
      return std::nullopt;
    }
    read_buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

std::string ChildProcess::Diagnostics() {
  std::string out = "'" + argv_.front() + "' ";
  // Give a dying child a moment so the status is reportable.
  for (int i = 0; i < 100 && !wait_status_; ++i) {
    Reap(false);
    if (!wait_status_) ::usleep(1000);
  }
  out += wait_status_ ? DescribeStatus(*wait_status_) : "still running";
  std::lock_guard<std::mutex> lock(stderr_mutex_);
  if (!stderr_tail_.empty()) out += "; stderr: " + stderr_tail_;
  return out;
}

}  // namespace spin
