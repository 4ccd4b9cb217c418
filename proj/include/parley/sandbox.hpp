#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace parley {

struct SandboxLimits {
    std::chrono::milliseconds wall_time{10000};
    std::int64_t memory_bytes = 512ll * 1024 * 1024;
};

struct SandboxResult {
    int exit_code = -1;
    bool timed_out = false;
    bool spawn_failed = false;
    std::string output;  // merged stdout/stderr
};

/// Writes `program` to a temp file and runs it under `interpreter` in a child
/// process with an address-space cap and a wall-clock deadline (SIGKILL past
/// the deadline, RLIMIT_CPU as a backstop).
SandboxResult run_sandboxed(const std::string& interpreter, const std::string& program,
                            const SandboxLimits& limits);

/// PATH lookup for the interpreter serving `language` ("python" -> python3).
/// Throws Error(sandbox) when none is available.
std::string resolve_interpreter(const std::string& language);

}  // namespace parley
