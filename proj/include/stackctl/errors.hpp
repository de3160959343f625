#pragma once

#include <stdexcept>
#include <string>

namespace stackctl {

// Error category, used by the CLI to pick exit codes: domain failures
// exit 1, environmental failures (I/O, malformed input text) exit 2.
enum class errc {
    domain,
    io,
    syntax,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void throw_domain(const std::string& what) { throw error(errc::domain, what); }
[[noreturn]] inline void throw_io(const std::string& what) { throw error(errc::io, what); }
[[noreturn]] inline void throw_syntax(const std::string& what) { throw error(errc::syntax, what); }

}  // namespace stackctl
