#pragma once

#include <stdexcept>
#include <string>

namespace covml {

// base class for all toolkit errors
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// malformed or inconsistent input: schema violations, broken invariants,
// kind mismatches, non-normalized states
class validation_error : public error {
public:
    explicit validation_error(const std::string& what) : error(what) {}
};

// the block-splitting construction failed its own postconditions
class decomposition_error : public error {
public:
    explicit decomposition_error(const std::string& what) : error(what) {}
};

// a truncated-space computation left its region of validity
class truncation_error : public error {
public:
    explicit truncation_error(const std::string& what) : error(what) {}
};

} // namespace covml
