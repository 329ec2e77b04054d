#pragma once

#include <stdexcept>
#include <string>

namespace lexis {

// Bad input: malformed files, unknown tokens, precondition violations by callers.
// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A structural invariant of a Lexis-DAG does not hold where it must.
// The CLI maps this to exit code 2.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lexis
