#pragma once

#include <stdexcept>
#include <string>

namespace otriage {

// Malformed input that could not be decoded (bad JSON line, bad timestamp, ...).
// Messages name the file and line where possible.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input that violates a contract (duplicate id, dangling reference,
// out-of-range field, wrong dimension, ...).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A pipeline stage failed; carries the stage name for exit diagnostics.
struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& msg)
        : std::runtime_error("stage '" + stage + "': " + msg), stage_name(stage) {}
    std::string stage_name;
};

}  // namespace otriage
