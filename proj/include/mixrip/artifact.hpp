#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace mixrip {

// Writes the two artifacts of a run: <out>/<command>-<seed>.csv with named
// columns (reals at 17 significant digits) and a JSON sidecar with config,
// runtime and assertion results.
class ArtifactWriter {
public:
    ArtifactWriter(const std::string& out_dir, const std::string& command,
                   std::uint64_t seed);

    std::string csv_path() const;
    std::string json_path() const;

    void set_columns(const std::vector<std::string>& names);
    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& values);

    nlohmann::json& sidecar() { return sidecar_; }
    void add_assertion(const std::string& name, bool pass, const std::string& detail = "");
    bool all_assertions_pass() const;

    void write();

private:
    std::string out_dir_;
    std::string command_;
    std::uint64_t seed_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    nlohmann::json sidecar_;
};

} // namespace mixrip
