#pragma once
#include <stdexcept>
#include <string>

namespace sddf {

// Error categories map 1:1 onto CLI exit codes.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
    static constexpr int exit_code = 2;
};
struct DataError : std::runtime_error {
    explicit DataError(const std::string& m) : std::runtime_error(m) {}
    static constexpr int exit_code = 3;
};
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& m) : std::runtime_error(m) {}
    static constexpr int exit_code = 4;
};
struct MetricError : std::runtime_error {
    explicit MetricError(const std::string& m) : std::runtime_error(m) {}
    static constexpr int exit_code = 5;
};

} // namespace sddf
