#pragma once

/**
 * Exception taxonomy.
 *
 * ValidationError  - a configuration/scenario value violates an invariant;
 *                    the message names the offending field.
 * GeometryError    - a geometric construction is physically impossible
 *                    (degenerate guide curve, rover wider than the mouth...).
 * Parse/IO failures reuse std::runtime_error with the path in the message.
 */

#include <stdexcept>
#include <string>

namespace swapsim {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace swapsim
