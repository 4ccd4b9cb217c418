#pragma once

#include <stdexcept>
#include <string>

namespace parley {

/// Broad failure categories; the C API maps these onto status codes.
enum class ErrorKind {
    config,     // bad or inconsistent configuration
    io,         // filesystem / persistence
    transport,  // network-level backend failure (retryable)
    script,     // scripted-backend miss or script file defect
    parse,      // malformed model output after all re-prompts
    contract,   // caller violated an operation precondition
    sandbox,    // sandbox could not be spawned (infrastructure, not a 0 score)
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Transport failures carry how many attempts were made before giving up.
class TransportError : public Error {
public:
    TransportError(std::string message, int attempts)
        : Error(ErrorKind::transport, std::move(message)), attempts_(attempts) {}

    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

const char* to_string(ErrorKind kind);

}  // namespace parley
