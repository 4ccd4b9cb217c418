#include "parley/sandbox.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "parley/error.hpp"

namespace parley {

namespace {

std::string temp_path(const char* stem) {
    const char* base = std::getenv("TMPDIR");
    std::string dir = base && *base ? base : "/tmp";
    static std::atomic<unsigned> counter{0};
    std::ostringstream ss;
    ss << dir << "/" << stem << "." << ::getpid() << "." << counter.fetch_add(1);
    return ss.str();
}

}  // namespace

std::string resolve_interpreter(const std::string& language) {
    std::vector<std::string> names;
    if (language == "python") {
        names = {"python3", "python"};
    } else if (language == "sh" || language == "shell") {
        names = {"sh"};
    } else {
        throw Error(ErrorKind::sandbox, "no interpreter known for language '" + language + "'");
    }
    const char* path_env = std::getenv("PATH");
    std::string path = path_env ? path_env : "/usr/bin:/bin";
    for (const std::string& name : names) {
        std::stringstream dirs(path);
        std::string dir;
        while (std::getline(dirs, dir, ':')) {
            if (dir.empty()) continue;
            std::string candidate = dir + "/" + name;
            if (::access(candidate.c_str(), X_OK) == 0) return candidate;
        }
    }
    throw Error(ErrorKind::sandbox, "no interpreter for language '" + language +
                                        "' found on PATH (infrastructure, not a task failure)");
}

SandboxResult run_sandboxed(const std::string& interpreter, const std::string& program,
                            const SandboxLimits& limits) {
    std::string program_path = temp_path("parley_sandbox_prog");
    std::string output_path = temp_path("parley_sandbox_out");
    {
        std::ofstream out(program_path);
        if (!out) throw Error(ErrorKind::sandbox, "cannot write sandbox program file");
        out << program;
    }

    pid_t pid = ::fork();
    if (pid < 0) {
        ::unlink(program_path.c_str());
        throw Error(ErrorKind::sandbox, std::string("fork failed: ") + std::strerror(errno));
    }

    if (pid == 0) {
        int fd = ::open(output_path.c_str(), O_CREAT | O_WRONLY | O_TRUNC, 0600);
        if (fd >= 0) {
            ::dup2(fd, STDOUT_FILENO);
            ::dup2(fd, STDERR_FILENO);
            ::close(fd);
        }
        if (limits.memory_bytes > 0) {
            rlimit mem{static_cast<rlim_t>(limits.memory_bytes),
                       static_cast<rlim_t>(limits.memory_bytes)};
            ::setrlimit(RLIMIT_AS, &mem);
        }
        // CPU backstop one second past the wall deadline
        rlim_t cpu_s = static_cast<rlim_t>(limits.wall_time.count() / 1000 + 2);
        rlimit cpu{cpu_s, cpu_s};
        ::setrlimit(RLIMIT_CPU, &cpu);
        ::execl(interpreter.c_str(), interpreter.c_str(), program_path.c_str(),
                static_cast<char*>(nullptr));
        // exec failed: leave a marker the parent can distinguish from test output
        const char* marker = "PARLEY_EXEC_FAIL\n";
        ssize_t ignored = ::write(STDOUT_FILENO, marker, std::strlen(marker));
        (void)ignored;
        ::_exit(127);
    }

    SandboxResult result;
    auto deadline = std::chrono::steady_clock::now() + limits.wall_time;
    int status = 0;
    for (;;) {
        pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0 && errno != EINTR) {
            status = -1;
            break;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }

    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);

    {
        std::ifstream in(output_path, std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            result.output = ss.str();
        }
    }
    ::unlink(program_path.c_str());
    ::unlink(output_path.c_str());

    if (result.output.find("PARLEY_EXEC_FAIL") != std::string::npos) result.spawn_failed = true;
    return result;
}

}  // namespace parley
