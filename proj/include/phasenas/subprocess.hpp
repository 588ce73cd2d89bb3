#pragma once

#include <string>
#include <vector>

namespace phasenas {

// Line-oriented child process: one request line on its stdin, one response
// line from its stdout. Used by the external evaluator protocol.
class LineSubprocess {
public:
    // argv[0] is the program; extra_env entries are "KEY=VALUE"
    LineSubprocess(std::vector<std::string> argv, std::vector<std::string> extra_env);
    ~LineSubprocess();

    LineSubprocess(const LineSubprocess&) = delete;
    LineSubprocess& operator=(const LineSubprocess&) = delete;

    bool running() const;

    // writes line + '\n'; throws std::runtime_error on a dead pipe
    void write_line(const std::string& line);

    // reads up to '\n' (not included); throws std::runtime_error on
    // timeout (child is killed) or child exit
    std::string read_line(long timeout_ms);

    void kill_child();

private:
    void spawn();

    std::vector<std::string> argv_;
    std::vector<std::string> extra_env_;
    int child_pid_ = -1;
    int to_child_ = -1;   // write end of child's stdin
    int from_child_ = -1; // read end of child's stdout
    std::string buffer_;
};

} // namespace phasenas
