#include "phasenas/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace phasenas {

namespace {

[[noreturn]] void throw_errno(const std::string& what)
{
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

} // namespace

LineSubprocess::LineSubprocess(std::vector<std::string> argv,
                               std::vector<std::string> extra_env)
    : argv_(std::move(argv)), extra_env_(std::move(extra_env))
{
    if (argv_.empty()) throw std::invalid_argument("subprocess: empty command");
    spawn();
}

LineSubprocess::~LineSubprocess()
{
    kill_child();
}

void LineSubprocess::spawn()
{
    int in_pipe[2];  // parent -> child
    int out_pipe[2]; // child -> parent
    if (pipe(in_pipe) != 0) throw_errno("subprocess: pipe");
    if (pipe(out_pipe) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw_errno("subprocess: pipe");
    }
    const pid_t pid = fork();
    if (pid < 0) throw_errno("subprocess: fork");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        std::vector<char*> args;
        for (auto& a : argv_) args.push_back(a.data());
        args.push_back(nullptr);
        for (auto& kv : extra_env_) putenv(kv.data());
        execvp(args[0], args.data());
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    child_pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    buffer_.clear();
}

bool LineSubprocess::running() const
{
    return child_pid_ > 0;
}

void LineSubprocess::write_line(const std::string& line)
{
    if (!running()) spawn();
    std::string payload = line + "\n";
    std::size_t off = 0;
    while (off < payload.size()) {
        const ssize_t n = write(to_child_, payload.data() + off, payload.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            kill_child();
            throw std::runtime_error("subprocess: write to child failed");
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string LineSubprocess::read_line(long timeout_ms)
{
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            kill_child();
            throw std::runtime_error("subprocess: response timeout");
        }
        const long wait_ms = static_cast<long>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        pollfd pfd{from_child_, POLLIN, 0};
        const int pr = poll(&pfd, 1, static_cast<int>(std::max(1L, wait_ms)));
        if (pr < 0) {
            if (errno == EINTR) continue;
            kill_child();
            throw_errno("subprocess: poll");
        }
        if (pr == 0) {
            kill_child();
            throw std::runtime_error("subprocess: response timeout");
        }
        char chunk[4096];
        const ssize_t n = read(from_child_, chunk, sizeof(chunk));
        if (n < 0) {
            if (errno == EINTR) continue;
            kill_child();
            throw_errno("subprocess: read");
        }
        if (n == 0) {
            kill_child();
            throw std::runtime_error("subprocess: child closed its output");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void LineSubprocess::kill_child()
{
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = -1;
    from_child_ = -1;
    if (child_pid_ > 0) {
        int status = 0;
        if (waitpid(child_pid_, &status, WNOHANG) == 0) {
            kill(child_pid_, SIGKILL);
            waitpid(child_pid_, &status, 0);
        }
        child_pid_ = -1;
    }
}

} // namespace phasenas
