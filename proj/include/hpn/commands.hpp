#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hpn {

// Exit statuses shared by all verbs.
enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

struct CommandOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> config_text;  // used when no path is given
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::string scope = "all";
    int lmax = 1;
};

// Each verb catches its own errors, reports them on `err` and returns an exit status.
int cmd_verify(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_hierarchy(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const CommandOptions& o, std::ostream& out, std::ostream& err);

}  // namespace hpn
