#ifndef POLISOG_COMMANDS_HPP
#define POLISOG_COMMANDS_HPP

#include "json_io.hpp"

namespace polisog {

struct Options {
    unsigned long long seed = 1;
    int precision = 12;
    std::optional<Rational> norm_cap;
    int height = 3;
};

enum class Status : int { kOk = 0, kNegative = 2 };

struct CommandResult {
    Status status = Status::kOk;
    io::json body;
};

const std::vector<std::string>& verbs();

/// Runs one verb on its JSON input.  Failures propagate as Error.
CommandResult run_command(const std::string& verb, const io::json& input, const Options& opt);

/// Parses the input against the verb's schema without computing.
io::json validate_input(const std::string& verb, const io::json& input);

io::json error_json(ErrorCode code, const std::string& message);

}  // namespace polisog

#endif
