// Copyright 2026 The hapsteer Authors. All Rights Reserved.
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

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <memory>
#include <string>

#include "hapsteer/errors.hpp"
#include "hapsteer/intent.hpp"

namespace hapsteer {

namespace {

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("external predictor: write failed: ") +
                               std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

}  // namespace

ProcessModel::ProcessModel(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("external predictor command is empty");
}

ProcessModel::~ProcessModel() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

void ProcessModel::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
    throw std::runtime_error("external predictor: pipe() failed");
  }
  // A child that exits early must not kill us with SIGPIPE.
  ::signal(SIGPIPE, SIG_IGN);
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("external predictor: fork() failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

int ProcessModel::operator()(std::span<const double> features) {
  if (pid_ < 0) start();

  std::string line;
  line.reserve(features.size() * 12);
  std::array<char, 32> buf{};
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i) line.push_back(',');
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), features[i]);
    line.append(buf.data(), end);
  }
  line.push_back('\n');
  write_all(to_child_, line);

  for (;;) {
    const auto nl = pending_.find('\n');
    if (nl != std::string::npos) {
      const std::string reply = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      if (reply == "1") return 1;
      if (reply == "0") return 0;
      throw std::runtime_error("external predictor: expected 0 or 1, got '" + reply + "'");
    }
    char chunk[256];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw std::runtime_error("external predictor: process closed its output");
    pending_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::unique_ptr<IntentPredictor> make_process_predictor(const std::string& command) {
  auto model = std::make_shared<ProcessModel>(command);
  return std::make_unique<ExternalPredictor>(
      [model](std::span<const double> features) { return (*model)(features); });
}

}  // namespace hapsteer
