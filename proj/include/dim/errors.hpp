// Error taxonomy.  Hard failures (bad arguments, broken preconditions, I/O)
// are exceptions; protocol-level rejections that honest code must branch on
// (handshake verdicts, decode failures) travel as values -- see RejectReason
// in handshake.hpp and RxFail in radio.hpp.
#pragma once

#include <stdexcept>
#include <string>

namespace dim {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// identity layer
struct InvalidIdentity : Error { using Error::Error; };
struct InvalidSecret : Error { using Error::Error; };
struct InvalidPublicValue : Error { using Error::Error; };
struct TamperedEnvelope : Error { using Error::Error; };
struct EncodingError : Error { using Error::Error; };

// ledger layer
struct RejectedTx : Error { using Error::Error; };
struct NodeUnavailable : Error { using Error::Error; };
struct Unauthorized : Error { using Error::Error; };

// mobility / scenario layer
struct OutOfRange : Error { using Error::Error; };
struct InvalidScenario : Error { using Error::Error; };

// radio layer
struct InvalidDistance : Error { using Error::Error; };

// experiment tooling
struct ConfigError : Error { using Error::Error; };
struct IncompleteResults : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace dim
