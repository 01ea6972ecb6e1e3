#pragma once

#include <stdexcept>
#include <string>

namespace latred {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Basis (or channel) turned out not to have full column rank.
struct RankDeficientError : Error {
    int index;  // first dependent generator, 0-based
    RankDeficientError(int idx, const std::string& msg) : Error(msg), index(idx) {}
};

// A desk-scale guard (rank cap, codebook cap) refused the computation.
struct GuardError : Error {
    using Error::Error;
};

// Malformed input file.
struct ParseError : Error {
    int line;  // 1-based physical line number
    ParseError(int ln, const std::string& msg) : Error(msg), line(ln) {}
};

// Invalid experiment / CLI configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace latred
