#pragma once

#include <stdexcept>
#include <string>

namespace wakegait {

// Exit codes shared by the CLI and the Python layer.
enum class ExitCode : int { ok = 0, config = 2, numeric = 3, check = 4 };

/// Invalid or unparsable configuration. `field` names the offending key when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Geometry or parameter combination that the model cannot represent
/// (degenerate stations, ill-conditioned Fourier system, ...).
class RejectedConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite state during time marching or wake transport.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Index-aligned mesh comparison on meshes with different topology.
class MeshMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wakegait
