#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asap {

// Every error thrown by the library derives from Error so callers (the CLI in
// particular) can catch pipeline failures separately from programming bugs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IncomparableError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class DuplicateStateError : public Error {
public:
    using Error::Error;
};

class GrammarError : public Error {
public:
    GrammarError(std::size_t offset, const std::string& what)
        : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class NoScorecardError : public Error {
public:
    using Error::Error;
};

class LengthMismatchError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

class EmptyCorpusError : public Error {
public:
    using Error::Error;
};

// OCR service failures. Only TransportError is retried.
class TransportError : public Error {
public:
    using Error::Error;
};

class ServiceError : public Error {
public:
    using Error::Error;
};

class QuotaError : public Error {
public:
    using Error::Error;
};

}  // namespace asap
