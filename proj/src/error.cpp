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

#include "sidelink/error.hpp"

namespace sidelink {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DuplicateCertificate: return "DuplicateCertificate";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::NotFound: return "NotFound";
    case Errc::SchemeMismatch: return "SchemeMismatch";
    case Errc::InconsistentWitness: return "InconsistentWitness";
    case Errc::EntityNotInState: return "EntityNotInState";
    case Errc::MessageMismatch: return "MessageMismatch";
    case Errc::MessageNotCommitted: return "MessageNotCommitted";
    case Errc::CertificateNotConfirmed: return "CertificateNotConfirmed";
    case Errc::ProofFailure: return "ProofFailure";
    case Errc::SidechainActive: return "SidechainActive";
    case Errc::NotOwner: return "NotOwner";
    case Errc::NoSentRecord: return "NoSentRecord";
    case Errc::AmountExceedsSent: return "AmountExceedsSent";
    case Errc::NameConflict: return "NameConflict";
    case Errc::DuplicateTokenId: return "DuplicateTokenId";
    case Errc::ZeroAmount: return "ZeroAmount";
    case Errc::EpochNotOver: return "EpochNotOver";
    case Errc::InvalidInstance: return "InvalidInstance";
    case Errc::MessageRedeemed: return "MessageRedeemed";
  }
  return "Unknown";
}

ProtocolError::ProtocolError(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace sidelink
