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

#ifndef SPLITAGENT_TOOL_PROOF_H_
#define SPLITAGENT_TOOL_PROOF_H_

// Hash commitments for locally executed tools.
//
//   commitment(tag, tool_id, nonce, data) =
//       SHA-256(tag || lp(tool_id) || lp(nonce) || lp(data))
//
// where lp(x) is x prefixed by its length as 8 big-endian bytes and tag is
// "splitagent.input" or "splitagent.output". proof_digest is SHA-256 over
// "splitagent.proof" and the length-prefixed tool_id, nonce, both
// commitments and output_abstract, so changing any field breaks it.
//
// This is a commitment scheme checked by replay on the privacy side, not a
// zero-knowledge proof; a dishonest prover is not ruled out.

#include <string>

#include "absl/strings/string_view.h"
#include "splitagent/protocol.h"

namespace splitagent {

std::string Sha256Hex(absl::string_view bytes);

std::string InputCommitment(absl::string_view tool_id, absl::string_view nonce,
                            absl::string_view input);
std::string OutputCommitment(absl::string_view tool_id, absl::string_view nonce,
                             absl::string_view output);
std::string ProofDigest(const ToolProof& proof);

ToolProof MakeToolProof(absl::string_view tool_id, absl::string_view input,
                        absl::string_view output, absl::string_view output_abstract,
                        absl::string_view nonce);

// Needs only the proof and a previously received output commitment.
bool VerifyToolProof(const ToolProof& proof, absl::string_view expected_output_commitment);

// Privacy-side check against the raw input and a re-executed output.
bool ReplayVerify(const ToolProof& proof, absl::string_view input, absl::string_view output);

}  // namespace splitagent

#endif  // SPLITAGENT_TOOL_PROOF_H_
