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

#include "splitagent/tool_proof.h"

#include <openssl/evp.h>

#include <array>
#include <cstdint>

#include "absl/strings/escaping.h"

namespace splitagent {
namespace {

void AppendPrefixed(std::string& out, absl::string_view field) {
  const std::uint64_t n = field.size();
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((n >> shift) & 0xFF));
  }
  out.append(field.data(), field.size());
}

std::string Commit(absl::string_view tag, absl::string_view tool_id,
                   absl::string_view nonce, absl::string_view data) {
  std::string buf(tag);
  AppendPrefixed(buf, tool_id);
  AppendPrefixed(buf, nonce);
  AppendPrefixed(buf, data);
  return Sha256Hex(buf);
}

}  // namespace

std::string Sha256Hex(absl::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr);
  return absl::BytesToHexString(
      absl::string_view(reinterpret_cast<const char*>(digest.data()), length));
}

std::string InputCommitment(absl::string_view tool_id, absl::string_view nonce,
                            absl::string_view input) {
  return Commit("splitagent.input", tool_id, nonce, input);
}

std::string OutputCommitment(absl::string_view tool_id, absl::string_view nonce,
                             absl::string_view output) {
  return Commit("splitagent.output", tool_id, nonce, output);
}

std::string ProofDigest(const ToolProof& proof) {
  std::string buf("splitagent.proof");
  AppendPrefixed(buf, proof.tool_id);
  AppendPrefixed(buf, proof.nonce);
  AppendPrefixed(buf, proof.input_commitment);
  AppendPrefixed(buf, proof.output_commitment);
  AppendPrefixed(buf, proof.output_abstract);
  return Sha256Hex(buf);
}

ToolProof MakeToolProof(absl::string_view tool_id, absl::string_view input,
                        absl::string_view output, absl::string_view output_abstract,
                        absl::string_view nonce) {
  ToolProof proof;
  proof.tool_id = std::string(tool_id);
  proof.nonce = std::string(nonce);
  proof.input_commitment = InputCommitment(tool_id, nonce, input);
  proof.output_commitment = OutputCommitment(tool_id, nonce, output);
  proof.output_abstract = std::string(output_abstract);
  proof.proof_digest = ProofDigest(proof);
  return proof;
}

bool VerifyToolProof(const ToolProof& proof, absl::string_view expected_output_commitment) {
  return proof.output_commitment == expected_output_commitment &&
         proof.proof_digest == ProofDigest(proof);
}

bool ReplayVerify(const ToolProof& proof, absl::string_view input, absl::string_view output) {
  return proof.input_commitment == InputCommitment(proof.tool_id, proof.nonce, input) &&
         VerifyToolProof(proof, OutputCommitment(proof.tool_id, proof.nonce, output));
}

}  // namespace splitagent
