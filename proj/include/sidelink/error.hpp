// Copyright 2026 The Sidelink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sidelink {

enum class Errc {
  IndexOutOfRange,
  DuplicateCertificate,
  InvalidParams,
  NotFound,
  SchemeMismatch,
  InconsistentWitness,
  EntityNotInState,
  MessageMismatch,
  MessageNotCommitted,
  CertificateNotConfirmed,
  ProofFailure,
  SidechainActive,
  NotOwner,
  NoSentRecord,
  AmountExceedsSent,
  NameConflict,
  DuplicateTokenId,
  ZeroAmount,
  EpochNotOver,
  InvalidInstance,
  MessageRedeemed,
};

std::string_view to_string(Errc code);

/// Precondition or construction failure raised by protocol operations.
/// Transaction-level rejections are reported as verdicts instead.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sidelink
