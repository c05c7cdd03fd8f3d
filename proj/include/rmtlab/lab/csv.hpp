#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace rmtlab::lab {

/// 17 significant digits; round-trips every double.
std::string format_real(double x);

/// Plain comma-separated writer. Fields are written verbatim, so callers pass
/// only numbers and identifiers.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

    void row(const std::vector<std::string>& fields);
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t width_;
    std::size_t rows_ = 0;
};

/// Creates parent directories as needed; throws IoFailure with the path.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rmtlab::lab
