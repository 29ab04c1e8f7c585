#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fairlens {

std::string read_text_file(const std::filesystem::path& path);

/// Creates missing parent directories, then replaces the file's contents.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace fairlens
