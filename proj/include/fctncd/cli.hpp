#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fctncd/problem.hpp"

namespace fctncd {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNonConvergence = 3,
    kExitInternal = 4,
};

/// Flat `key = value` configuration grouped in [section] blocks.
/// '#' and ';' start comments. Keys are addressed as "section.key".
class ConfigFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
        int column = 0;
        mutable bool used = false;
    };

    static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
    static ConfigFile load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    /// Throws ConfigError naming the first key nothing asked for.
    void reject_unused() const;

    /// Every key with its raw value, in key order.
    const std::map<std::string, Entry>& entries() const { return entries_; }

private:
    const Entry* find(const std::string& key) const;
    [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& what) const;

    std::string origin_;
    std::map<std::string, Entry> entries_;
};

/// `fctncd run <config>`: one simulation with snapshots and a summary.
int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

struct BenchArgs {
    std::string suite;
    std::vector<std::string> schemes{"DIV", "NDVL", "NDVA"};
    std::vector<double> sigmas{0.0, 0.5, 1.0};
    std::optional<std::filesystem::path> out;
    bool oracle = false;
    /// Rotation only: grid cells per side and step count (defaults 128, 5000).
    std::size_t cells = 128;
    std::size_t steps = 5000;
};

/// `fctncd bench <suite>`: error table in CSV.
int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

/// `fctncd converge <config>`: manufactured-solution refinement study.
int cmd_converge(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

}  // namespace fctncd
