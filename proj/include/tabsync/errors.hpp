#pragma once

#include <stdexcept>
#include <string>

namespace tabsync {

// Root of every error the library throws. Callers that only care about
// "something about the input was wrong" can catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Audio decoding.
class FormatError : public Error { using Error::Error; };
class UnsupportedFormatError : public Error { using Error::Error; };
class TruncationError : public Error { using Error::Error; };

// Numerics and domain checks.
class SizeError : public Error { using Error::Error; };
class InsufficientDataError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// Detection interchange parsing.
class ParseError : public Error {
public:
    ParseError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};
class LabelError : public ParseError { using ParseError::ParseError; };
class OrderingError : public ParseError { using ParseError::ParseError; };

// Geometry.
class DegeneracyError : public Error { using Error::Error; };

// Fusion.
class NoDetectionError : public Error { using Error::Error; };
class InsufficientDetectionsError : public Error { using Error::Error; };
class UnplayableNoteError : public Error { using Error::Error; };

// Fixture generation.
class SpecError : public Error { using Error::Error; };

} // namespace tabsync
