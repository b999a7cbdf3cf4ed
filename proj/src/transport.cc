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

#include "splitagent/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "splitagent/status.h"

namespace splitagent {

absl::Status LoopbackTransport::Send(const ProtocolMessage& msg) {
  SPLITAGENT_ASSIGN_OR_RETURN(const std::string frame, Encode(msg));
  SPLITAGENT_ASSIGN_OR_RETURN(const ProtocolMessage received, Decode(frame));
  for (const ProtocolMessage& reply : agent_.Handle(received)) {
    SPLITAGENT_ASSIGN_OR_RETURN(std::string out, Encode(reply));
    inbox_.push_back(std::move(out));
  }
  return absl::OkStatus();
}

absl::StatusOr<ProtocolMessage> LoopbackTransport::Receive() {
  if (inbox_.empty()) {
    return MakeError(ErrorKind::kPeerUnavailable, "reasoning agent sent nothing");
  }
  const std::string frame = std::move(inbox_.front());
  inbox_.pop_front();
  return Decode(frame);
}

absl::Status WriteAll(int fd, absl::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return MakeError(ErrorKind::kPeerUnavailable, absl::StrCat("send: ", std::strerror(errno)));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::size_t> ReadFrame(int fd, std::string& buffer) {
  char chunk[65536];
  while (true) {
    SPLITAGENT_ASSIGN_OR_RETURN(const std::size_t length, CompleteFrameLength(buffer));
    if (length > 0) return length;
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      return MakeError(ErrorKind::kPeerUnavailable, absl::StrCat("recv: ", std::strerror(errno)));
    }
    if (n == 0) {
      return buffer.empty()
                 ? MakeError(ErrorKind::kPeerUnavailable, "connection closed")
                 : MakeError(ErrorKind::kFrameTruncated, "connection closed mid-frame");
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

absl::StatusOr<std::pair<std::string, int>> SplitHostPort(const std::string& address) {
  const std::size_t colon = address.rfind(':');
  int port = 0;
  if (colon == std::string::npos || !absl::SimpleAtoi(address.substr(colon + 1), &port) ||
      port < 0 || port > 65535) {
    return absl::InvalidArgumentError(absl::StrCat("expected host:port, got '", address, "'"));
  }
  std::string host = address.substr(0, colon);
  if (host.empty()) host = "127.0.0.1";
  return std::make_pair(host, port);
}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpTransport> TcpTransport::Adopt(int fd) {
  return std::unique_ptr<TcpTransport>(new TcpTransport(fd));
}

absl::StatusOr<std::unique_ptr<TcpTransport>> TcpTransport::Connect(const std::string& address) {
  SPLITAGENT_ASSIGN_OR_RETURN(const auto host_port, SplitHostPort(address));
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const std::string port = std::to_string(host_port.second);
  if (::getaddrinfo(host_port.first.c_str(), port.c_str(), &hints, &found) != 0) {
    return MakeError(ErrorKind::kPeerUnavailable, absl::StrCat("cannot resolve ", address));
  }
  int fd = -1;
  for (addrinfo* a = found; a != nullptr; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) return MakeError(ErrorKind::kPeerUnavailable, absl::StrCat("cannot connect to ", address));
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return Adopt(fd);
}

absl::Status TcpTransport::Send(const ProtocolMessage& msg) {
  SPLITAGENT_ASSIGN_OR_RETURN(const std::string frame, Encode(msg));
  return WriteAll(fd_, frame);
}

absl::StatusOr<ProtocolMessage> TcpTransport::Receive() {
  SPLITAGENT_ASSIGN_OR_RETURN(const std::size_t length, ReadFrame(fd_, buffer_));
  const std::string frame = buffer_.substr(0, length);
  buffer_.erase(0, length);
  return Decode(frame);
}

absl::StatusOr<std::pair<int, int>> Listen(const std::string& address) {
  SPLITAGENT_ASSIGN_OR_RETURN(const auto host_port, SplitHostPort(address));
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return MakeError(ErrorKind::kIoFailure, "socket failed");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(host_port.second));
  if (::inet_pton(AF_INET, host_port.first.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    return absl::InvalidArgumentError(absl::StrCat("not an IPv4 address: ", host_port.first));
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd, 16) != 0) {
    ::close(fd);
    return MakeError(ErrorKind::kIoFailure,
                     absl::StrCat("cannot listen on ", address, ": ", std::strerror(errno)));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return std::make_pair(fd, static_cast<int>(ntohs(addr.sin_port)));
}

absl::Status ServeReasoning(int listen_fd, ReasoningBackend& backend, int max_sessions) {
  for (int served = 0; max_sessions == 0 || served < max_sessions; ++served) {
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return MakeError(ErrorKind::kIoFailure, absl::StrCat("accept: ", std::strerror(errno)));
    }
    ReasoningAgent agent(backend);
    std::string buffer;
    while (true) {
      auto length = ReadFrame(fd, buffer);
      if (!length.ok()) break;
      const std::string frame = buffer.substr(0, *length);
      buffer.erase(0, *length);
      auto msg = Decode(frame);
      if (!msg.ok()) {
        ErrorPayload error{ErrorKindName(ErrorKindOf(msg.status()).value_or(
                               ErrorKind::kSchemaViolation)),
                           std::string(msg.status().message())};
        if (auto out = Encode(ProtocolMessage{agent.session().session_id, 0, error}); out.ok()) {
          WriteAll(fd, *out).IgnoreError();
        }
        break;
      }
      bool failed = false;
      for (const ProtocolMessage& reply : agent.Handle(*msg)) {
        auto out = Encode(reply);
        if (!out.ok() || !WriteAll(fd, *out).ok()) failed = true;
      }
      if (failed) break;
    }
    ::close(fd);
  }
  return absl::OkStatus();
}

}  // namespace splitagent
