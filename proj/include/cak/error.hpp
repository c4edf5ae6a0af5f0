#pragma once

#include <stdexcept>
#include <string>

namespace cak {

// Domain error: bad input, failed precondition, unsupported combination.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration cap or a truncation-stability check was hit.
class CapError : public Error {
public:
    explicit CapError(const std::string& what) : Error(what) {}
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct Caps {
    int support_enum = 12;     // minimal_supports carrier size
    int quantifier = 8;        // eval_so1 / eval_mso carrier size
    int ef_carrier = 5;
    int ef_depth = 3;
    std::size_t moves = 200000;        // size of any move family
    int valuation_bits = 22;           // brute-force valuation enumeration
    std::size_t game_positions = 2000000;
};

}  // namespace cak
