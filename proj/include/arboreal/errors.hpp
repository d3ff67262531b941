#pragma once

#include <stdexcept>
#include <string>

namespace arboreal {

/// Caller supplied something outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A coefficient is not integral at the prime we are reducing modulo.
class BadReduction : public InvalidArgument {
public:
    BadReduction(std::size_t coefficient_index, const std::string& what)
        : InvalidArgument(what), index_(coefficient_index) {}
    std::size_t coefficient_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A configured degree cap, step budget or search range was exceeded.
class WorkLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A bounded search finished without a hit. Existence is not in question,
/// only the budget.
class NotFoundError : public WorkLimitError {
public:
    using WorkLimitError::WorkLimitError;
};

/// Input is legal but outside what the decision procedures cover
/// (irrational critical points).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A proved statement failed on concrete data. This always means a bug in
/// this library, never bad input.
class FalsificationError : public std::logic_error {
public:
    FalsificationError(const std::string& what, std::string transcript)
        : std::logic_error(what), transcript_(std::move(transcript)) {}
    const std::string& transcript() const noexcept { return transcript_; }

private:
    std::string transcript_;
};

}  // namespace arboreal
