#include "rmtlab/lab/csv.hpp"

#include <fmt/format.h>

#include "rmtlab/error.hpp"

namespace rmtlab::lab {

namespace {

void ensure_parent(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorKind::IoFailure, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : path_(path), width_(header.size()) {
    ensure_parent(path);
    out_.open(path, std::ios::out | std::ios::trunc);
    if (!out_) fail(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
    bool first = true;
    for (const auto& name : header) {
        if (!first) out_ << ',';
        out_ << name;
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) {
        fail(ErrorKind::DimensionMismatch, "CSV row width " + std::to_string(fields.size()) + " does not match header " +
                                               std::to_string(width_) + " in " + path_.string());
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
    ++rows_;
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) fail(ErrorKind::IoFailure, "write failed for " + path_.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::out | std::ios::trunc);
    if (!out) fail(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (out.fail()) fail(ErrorKind::IoFailure, "write failed for " + path.string());
}

}  // namespace rmtlab::lab
