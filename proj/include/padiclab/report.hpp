#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "padiclab/config.hpp"

namespace padiclab {

// Table writer emitting either TSV (header row + rows) or a JSON array of
// objects, depending on the configured format.  Output bytes are a pure
// function of the rows written.
class ReportWriter {
public:
    ReportWriter(const RunConfig& cfg, const std::string& name,
                 std::vector<std::string> columns)
        : format_(cfg.format), columns_(std::move(columns)) {
        std::filesystem::create_directories(cfg.out);
        path_ = cfg.out + "/" + name + (format_ == "tsv" ? ".tsv" : ".json");
        os_.open(path_, std::ios::binary | std::ios::trunc);
        if (!os_) throw config_error("cannot open report file: " + path_);
        if (format_ == "tsv") {
            for (size_t i = 0; i < columns_.size(); ++i)
                os_ << columns_[i] << (i + 1 < columns_.size() ? '\t' : '\n');
        }
    }

    void row(const std::vector<std::string>& values) {
        if (values.size() != columns_.size())
            throw std::logic_error("ReportWriter: column mismatch");
        if (format_ == "tsv") {
            for (size_t i = 0; i < values.size(); ++i)
                os_ << values[i] << (i + 1 < values.size() ? '\t' : '\n');
        } else {
            nlohmann::json obj;
            for (size_t i = 0; i < values.size(); ++i) obj[columns_[i]] = values[i];
            rows_.push_back(std::move(obj));
        }
    }

    const std::string& path() const { return path_; }

    ~ReportWriter() {
        if (format_ == "json") os_ << nlohmann::json(rows_).dump(1) << "\n";
    }

private:
    std::string format_;
    std::vector<std::string> columns_;
    std::string path_;
    std::ofstream os_;
    nlohmann::json rows_ = nlohmann::json::array();
};

}  // namespace padiclab
