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

#ifndef SPIN_SUBPROCESS_H_
#define SPIN_SUBPROCESS_H_

#include <sys/types.h>

#include <chrono>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace spin {

class SubprocessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A child process driven line by line over its standard streams. stderr is
// drained on a background thread and its tail kept for diagnostics.
// Not thread-safe; callers serialize access.
class ChildProcess {
 public:
  // argv[0] is resolved against PATH. Throws SubprocessError if the process
  // cannot be started.
  explicit ChildProcess(std::vector<std::string> argv);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  // Writes `line` plus a newline to the child's stdin.
  void WriteLine(std::string_view line);

  // Next line from the child's stdout without its newline. Returns nullopt
  // at end of stream; throws SubprocessError when `timeout` elapses first.
  std::optional<std::string> ReadLine(std::chrono::milliseconds timeout);

  // Exit status (if the child has exited) and the last bytes of stderr.
  std::string Diagnostics();

  // Sends SIGKILL and reaps the child.
  void Kill();

  bool running();

 private:
  void Reap(bool block);
  void CloseFd(int& fd);

  std::vector<std::string> argv_;
  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  int stderr_fd_ = -1;
  std::optional<int> wait_status_;
  std::string read_buffer_;

  std::thread stderr_thread_;
  std::mutex stderr_mutex_;
  std::string stderr_tail_;
};

}  // namespace spin

#endif  // SPIN_SUBPROCESS_H_
