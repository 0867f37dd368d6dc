#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cd {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Input violates a mathematical precondition (negative weight, empty set, ...).
class DomainError : public Error {
public:
	using Error::Error;
};

/// Malformed edge-list line; carries the 1-based line number.
class ParseError : public Error {
public:
	ParseError(std::size_t line, const std::string& what)
	    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

	std::size_t line() const noexcept { return line_; }

private:
	std::size_t line_;
};

/// A node has no outgoing weight and cannot be made stochastic.
class NormalizationError : public DomainError {
public:
	NormalizationError(std::size_t node, const std::string& what)
	    : DomainError(what), node_(node) {}

	std::size_t node() const noexcept { return node_; }

private:
	std::size_t node_;
};

/// Iterative method ran out of iterations.
class IterationError : public Error {
public:
	using Error::Error;
};

/// Exhaustive enumeration refused because the instance is too large.
class SizeError : public Error {
public:
	using Error::Error;
};

/// Invalid or inconsistent run configuration. `path` is the offending field.
class ConfigError : public Error {
public:
	ConfigError(std::string path, const std::string& what)
	    : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

	const std::string& path() const noexcept { return path_; }

private:
	std::string path_;
};

/// A runtime invariant of the dynamics was violated.
class InvariantError : public Error {
public:
	using Error::Error;
};

/// File could not be opened or written.
class FileError : public Error {
public:
	using Error::Error;
};

} // namespace cd
