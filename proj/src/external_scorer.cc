// Copyright 2026 The BITS Audit Authors.
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

#include "bits/external_scorer.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <chrono>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "bits/error.h"
#include "bits/text_util.h"
#include "json.hpp"

namespace bits {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string EncodeRequest(const ScoreRequest &request) {
  ordered_json j;
  j["id"] = request.id;
  j["text"] = request.text;
  return j.dump() + "\n";
}

namespace {

// Some JSON encoders write NaN, Infinity or out-of-range literals for
// non-finite floats. Returns the id of such a response, if it is one.
std::optional<std::string> NonFiniteResponseId(std::string_view line) {
  static const std::regex score(
      R"re(("score"\s*:\s*)(-?(?:NaN|Infinity)|-?[0-9]+(?:\.[0-9]*)?(?:[eE][-+]?[0-9]+)?))re");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(line.begin(), line.end(), m, score)) return std::nullopt;
  const std::string literal = m[2].str();
  if (literal.find_first_of("NI") == std::string::npos &&
      std::isfinite(std::strtod(literal.c_str(), nullptr))) {
    return std::nullopt;
  }
  std::string patched(line.begin(), m[2].first);
  patched += "null";
  patched.append(m[2].second, line.end());
  json j = json::parse(patched, nullptr, false);
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) return std::nullopt;
  return j["id"].get<std::string>();
}

}  // namespace

WireResponse DecodeResponse(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception &) {
    if (auto id = NonFiniteResponseId(line)) {
      throw Error(ErrorCode::kNonFiniteScore, "adapter returned a non-finite score for " + *id);
    }
    throw Error(ErrorCode::kProtocolViolation,
                "response is not JSON: '" + std::string(line.substr(0, 120)) + "'");
  }
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
    throw Error(ErrorCode::kProtocolViolation,
                "response lacks a string id: '" + std::string(line.substr(0, 120)) + "'");
  }
  WireResponse r;
  r.id = j["id"].get<std::string>();
  if (j.contains("error")) {
    throw Error(ErrorCode::kBackendError,
                "adapter failed on " + r.id + ": " + j["error"].dump());
  }
  if (!j.contains("score") || !j["score"].is_number()) {
    throw Error(ErrorCode::kProtocolViolation, "response for " + r.id + " lacks a score");
  }
  r.score = j["score"].get<double>();
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

// Validates a batch of responses against the request ids and returns the
// raw scores in request order.
class BatchJoin {
 public:
  explicit BatchJoin(const std::vector<ScoreRequest> &requests, size_t begin, size_t end)
      : begin_(begin), end_(end), requests_(requests) {
    for (size_t i = begin; i < end; ++i) index_.emplace(requests[i].id, i);
  }

  void Add(const WireResponse &r) {
    auto it = index_.find(r.id);
    if (it == index_.end()) {
      throw Error(ErrorCode::kIdMismatch, "response id " + r.id + " not in request batch");
    }
    if (!scores_.emplace(it->second, r.score).second) {
      throw Error(ErrorCode::kProtocolViolation, "duplicate response for " + r.id);
    }
  }

  bool Complete() const { return scores_.size() == end_ - begin_; }

  [[noreturn]] void FailMissing(const std::string &why) const {
    std::string missing;
    size_t count = 0;
    for (size_t i = begin_; i < end_; ++i) {
      if (scores_.count(i)) continue;
      if (count++ < 5) missing += (missing.empty() ? "" : ", ") + requests_[i].id;
    }
    throw Error(ErrorCode::kMissingResponse,
                why + "; no response for " + missing +
                    (count > 5 ? " and " + std::to_string(count - 5) + " more" : ""));
  }

  double Score(size_t i) const { return scores_.at(i); }

 private:
  size_t begin_, end_;
  const std::vector<ScoreRequest> &requests_;
  std::unordered_map<std::string, size_t> index_;
  std::map<size_t, double> scores_;
};

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

// One adapter process with pipes to its standard input and output.
class AdapterProcess {
 public:
  AdapterProcess(const std::vector<std::string> &command, int timeout_ms)
      : timeout_ms_(timeout_ms) {
    IgnoreSigpipe();
    int to_child[2], from_child[2], exec_err[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0 || ::pipe2(from_child, O_CLOEXEC) != 0 ||
        ::pipe2(exec_err, O_CLOEXEC) != 0) {
      throw Error(ErrorCode::kTransport, std::string("pipe: ") + std::strerror(errno));
    }
    std::vector<char *> argv;
    for (const auto &a : command) argv.push_back(const_cast<char *>(a.c_str()));
    argv.push_back(nullptr);

    pid_ = ::fork();
    if (pid_ < 0) throw Error(ErrorCode::kTransport, "fork failed");
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execvp(argv[0], argv.data());
      int err = errno;
      ssize_t ignored = ::write(exec_err[1], &err, sizeof(err));
      (void)ignored;
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    ::close(exec_err[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    int err = 0;
    ssize_t n = ::read(exec_err[0], &err, sizeof(err));
    ::close(exec_err[0]);
    if (n == sizeof(err)) {
      Kill();
      throw Error(ErrorCode::kTransport,
                  "cannot execute " + command[0] + ": " + std::strerror(err));
    }
    ::fcntl(in_fd_, F_SETFL, ::fcntl(in_fd_, F_GETFL) | O_NONBLOCK);
    ::fcntl(out_fd_, F_SETFL, ::fcntl(out_fd_, F_GETFL) | O_NONBLOCK);
  }

  AdapterProcess(const AdapterProcess &) = delete;
  AdapterProcess &operator=(const AdapterProcess &) = delete;

  ~AdapterProcess() { Kill(); }

  // Sends requests[begin, end) and collects one response per request.
  void Exchange(const std::vector<ScoreRequest> &requests, size_t begin, size_t end,
                BatchJoin &join) {
    std::string outgoing;
    for (size_t i = begin; i < end; ++i) outgoing += EncodeRequest(requests[i]);
    size_t written = 0;
    const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms_);

    while (!join.Complete()) {
      // Lines already buffered from a previous read.
      size_t nl;
      while (!join.Complete() && (nl = pending_.find('\n')) != std::string::npos) {
        std::string line = pending_.substr(0, nl);
        pending_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (Trim(line).empty()) continue;
        join.Add(DecodeResponse(line));
      }
      if (join.Complete()) break;
      if (eof_) join.FailMissing("adapter closed its output");

      auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                           deadline - Clock::now())
                           .count();
      if (remaining <= 0) join.FailMissing("timed out after " +
                                           std::to_string(timeout_ms_) + " ms");
      pollfd fds[2];
      int nfds = 0;
      fds[nfds++] = {out_fd_, POLLIN, 0};
      if (written < outgoing.size()) fds[nfds++] = {in_fd_, POLLOUT, 0};
      int rc = ::poll(fds, nfds, static_cast<int>(remaining));
      if (rc < 0 && errno != EINTR) {
        throw Error(ErrorCode::kTransport, std::string("poll: ") + std::strerror(errno));
      }
      if (rc <= 0) continue;
      if (nfds == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
        ssize_t n = ::write(in_fd_, outgoing.data() + written, outgoing.size() - written);
        if (n > 0) {
          written += static_cast<size_t>(n);
        } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
          // Adapter stopped reading; drain what it already said.
          written = outgoing.size();
        }
      }
      if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
        char buf[8192];
        ssize_t n = ::read(out_fd_, buf, sizeof(buf));
        if (n > 0) {
          pending_.append(buf, static_cast<size_t>(n));
        } else if (n == 0) {
          eof_ = true;
        } else if (errno != EAGAIN && errno != EINTR) {
          eof_ = true;
        }
      }
    }
  }

  // Closes the adapter's input and waits for it to exit.
  void Finish() {
    if (in_fd_ >= 0) {
      ::close(in_fd_);
      in_fd_ = -1;
    }
    const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms_);
    while (pid_ > 0) {
      int status = 0;
      pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || r < 0) {
        pid_ = -1;
        break;
      }
      if (Clock::now() > deadline) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    Kill();
  }

 private:
  void Kill() {
    if (in_fd_ >= 0) ::close(in_fd_);
    if (out_fd_ >= 0) ::close(out_fd_);
    in_fd_ = out_fd_ = -1;
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      int status = 0;
      ::waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  int timeout_ms_;
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string pending_;
  bool eof_ = false;
};

std::vector<ScoreRecord> Standardized(const std::vector<ScoreRequest> &sentences,
                                      const std::vector<double> &raw,
                                      const ScorerDescriptor &desc, size_t *clamped) {
  std::vector<ScoreRecord> out;
  out.reserve(sentences.size());
  size_t n_clamped = 0;
  for (size_t i = 0; i < sentences.size(); ++i) {
    bool c = false;
    double s = Standardize(raw[i], desc, &c);
    n_clamped += c;
    out.push_back({sentences[i].id, desc.name, raw[i], s});
  }
  if (clamped) *clamped = n_clamped;
  return out;
}

std::vector<double> ScoreProcess(const std::vector<ScoreRequest> &sentences,
                                 const ScorerEndpoint &endpoint) {
  const size_t n = sentences.size();
  const size_t batch = endpoint.batch_size;
  const size_t n_batches = (n + batch - 1) / batch;
  const size_t workers =
      std::min(static_cast<size_t>(endpoint.workers), std::max<size_t>(n_batches, 1));
  std::vector<double> raw(n, 0.0);
  std::vector<std::exception_ptr> failures(n_batches);

  auto work = [&](size_t w) {
    std::optional<AdapterProcess> proc;
    for (size_t b = w; b < n_batches; b += workers) {
      try {
        if (!proc) proc.emplace(endpoint.command, endpoint.timeout_ms);
        size_t begin = b * batch, end = std::min(n, begin + batch);
        BatchJoin join(sentences, begin, end);
        proc->Exchange(sentences, begin, end, join);
        for (size_t i = begin; i < end; ++i) raw[i] = join.Score(i);
      } catch (...) {
        failures[b] = std::current_exception();
        return;
      }
    }
    if (proc) proc->Finish();
  };

  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto &t : threads) t.join();
  }
  for (const auto &f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return raw;
}

std::vector<double> ScoreFileBatch(const std::vector<ScoreRequest> &sentences,
                                   const ScorerEndpoint &endpoint) {
  std::string requests;
  for (const auto &s : sentences) requests += EncodeRequest(s);
  WriteFile(endpoint.request_file, requests);

  BatchJoin join(sentences, 0, sentences.size());
  if (!std::filesystem::exists(endpoint.response_file)) {
    join.FailMissing("response file " + endpoint.response_file.string() +
                     " not found; run the adapter on " + endpoint.request_file.string());
  }
  std::istringstream in(ReadFile(endpoint.response_file));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    join.Add(DecodeResponse(line));
  }
  if (!join.Complete()) join.FailMissing("incomplete response file");
  std::vector<double> raw(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) raw[i] = join.Score(i);
  return raw;
}

}  // namespace

std::vector<ScoreRecord> ScoreWithExternal(const std::vector<ScoreRequest> &sentences,
                                           const ScorerDescriptor &desc,
                                           const ScorerEndpoint &endpoint,
                                           size_t *clamped) {
  ValidateDescriptor(desc);
  if (sentences.empty()) return {};
  std::vector<double> raw;
  switch (desc.transport) {
    case Transport::kExternalProcess:
      if (endpoint.command.empty()) {
        throw Error(ErrorCode::kConfig, "scorer " + desc.name + " has no command");
      }
      raw = ScoreProcess(sentences, endpoint);
      break;
    case Transport::kFileBatch:
      raw = ScoreFileBatch(sentences, endpoint);
      break;
    case Transport::kBuiltin:
      return ScoreWithBuiltin(sentences, desc, ValenceLexicon::Load(endpoint.lexicon),
                              clamped);
  }
  return Standardized(sentences, raw, desc, clamped);
}

std::vector<ScoreRecord> ScoreWithBuiltin(const std::vector<ScoreRequest> &sentences,
                                          const ScorerDescriptor &desc,
                                          const ValenceLexicon &lexicon,
                                          size_t *clamped) {
  std::vector<double> raw;
  raw.reserve(sentences.size());
  for (const auto &s : sentences) raw.push_back(ScoreBuiltin(s.text, lexicon));
  return Standardized(sentences, raw, desc, clamped);
}

}  // namespace bits
