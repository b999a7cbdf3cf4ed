// Copyright 2026 The SplitAgent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPLITAGENT_TRANSPORT_H_
#define SPLITAGENT_TRANSPORT_H_

#include <deque>
#include <string>

#include "absl/status/statusor.h"
#include "splitagent/protocol.h"
#include "splitagent/reasoning.h"

namespace splitagent {

// Privacy-side view of the connection. Implementations move whole frames.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual absl::Status Send(const ProtocolMessage& msg) = 0;
  // PeerUnavailable when nothing more will arrive.
  virtual absl::StatusOr<ProtocolMessage> Receive() = 0;
};

// In-process pairing with a ReasoningAgent. Every message still goes through
// Encode/Decode so the bytes match what TCP would carry.
class LoopbackTransport : public Transport {
 public:
  explicit LoopbackTransport(ReasoningAgent& agent) : agent_(agent) {}

  absl::Status Send(const ProtocolMessage& msg) override;
  absl::StatusOr<ProtocolMessage> Receive() override;

 private:
  ReasoningAgent& agent_;
  std::deque<std::string> inbox_;
};

// Blocking TCP client.
class TcpTransport : public Transport {
 public:
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  // `address` is host:port. PeerUnavailable on failure.
  static absl::StatusOr<std::unique_ptr<TcpTransport>> Connect(const std::string& address);
  static std::unique_ptr<TcpTransport> Adopt(int fd);

  absl::Status Send(const ProtocolMessage& msg) override;
  absl::StatusOr<ProtocolMessage> Receive() override;

 private:
  explicit TcpTransport(int fd) : fd_(fd) {}
  int fd_;
  std::string buffer_;
};

// Raw stream helpers, shared with the servers.
absl::Status WriteAll(int fd, absl::string_view bytes);
// Reads until `buffer` holds a complete frame, returns its length.
absl::StatusOr<std::size_t> ReadFrame(int fd, std::string& buffer);
absl::StatusOr<std::pair<std::string, int>> SplitHostPort(const std::string& address);
// Listening socket bound to host:port (port 0 picks one). Returns the fd and
// the bound port.
absl::StatusOr<std::pair<int, int>> Listen(const std::string& address);

// Accepts connections on `listen_fd` and serves each with a fresh
// ReasoningAgent over `backend`, one at a time. Returns after
// `max_sessions` sessions (0 = forever).
absl::Status ServeReasoning(int listen_fd, ReasoningBackend& backend, int max_sessions = 0);

}  // namespace splitagent

#endif  // SPLITAGENT_TRANSPORT_H_
