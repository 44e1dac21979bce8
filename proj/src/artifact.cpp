#include "mixrip/artifact.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mixrip/util.hpp"

namespace mixrip {

ArtifactWriter::ArtifactWriter(const std::string& out_dir, const std::string& command,
                               std::uint64_t seed)
    : out_dir_(out_dir), command_(command), seed_(seed) {
    sidecar_["command"] = command;
    sidecar_["seed"] = seed;
    sidecar_["assertions"] = nlohmann::json::array();
}

std::string ArtifactWriter::csv_path() const {
    return out_dir_ + "/" + command_ + "-" + std::to_string(seed_) + ".csv";
}

std::string ArtifactWriter::json_path() const {
    return out_dir_ + "/" + command_ + "-" + std::to_string(seed_) + ".json";
}

void ArtifactWriter::set_columns(const std::vector<std::string>& names) {
    columns_ = names;
}

void ArtifactWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("ArtifactWriter: row width does not match columns");
    rows_.push_back(cells);
}

void ArtifactWriter::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(fmt17(v));
    add_row(cells);
}

void ArtifactWriter::add_assertion(const std::string& name, bool pass,
                                   const std::string& detail) {
    nlohmann::json a;
    a["name"] = name;
    a["pass"] = pass;
    if (!detail.empty()) a["detail"] = detail;
    sidecar_["assertions"].push_back(a);
}

bool ArtifactWriter::all_assertions_pass() const {
    for (const auto& a : sidecar_["assertions"])
        if (!a.at("pass").get<bool>()) return false;
    return true;
}

void ArtifactWriter::write() {
    std::filesystem::create_directories(out_dir_);
    std::ofstream csv(csv_path());
    if (!csv) throw std::runtime_error("cannot open " + csv_path());
    for (std::size_t i = 0; i < columns_.size(); ++i)
        csv << (i ? "," : "") << columns_[i];
    csv << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
        csv << "\n";
    }
    std::ofstream js(json_path());
    if (!js) throw std::runtime_error("cannot open " + json_path());
    js << sidecar_.dump(2) << "\n";
}

} // namespace mixrip
