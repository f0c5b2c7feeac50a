#pragma once

#include <stdexcept>
#include <string>

namespace curveorbit {

// Failure of a mathematical precondition. kind() is a stable identifier
// such as "RootNotRepresentable" or "PointNotOnCurve".
class DomainError : public std::runtime_error {
public:
    DomainError(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace curveorbit
