#pragma once

#include <stdexcept>
#include <string>

namespace planrec {

// Malformed input text: KB files, transcript records.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally readable but semantically broken knowledge base.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A statement matched no operator under any inference rule.
class NoInterpretationError : public std::runtime_error {
public:
    explicit NoInterpretationError(const std::string& what) : std::runtime_error(what) {}
};

// Every (interpretation, fragment, relation) candidate was invalid.
class EmptySetError : public std::runtime_error {
public:
    explicit EmptySetError(const std::string& what) : std::runtime_error(what) {}
};

// A parameter domain with no values at all; only reachable through KB bugs.
class DegenerateDomainError : public std::runtime_error {
public:
    explicit DegenerateDomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace planrec
