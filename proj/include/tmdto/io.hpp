#ifndef TMDTO_IO_HPP
#define TMDTO_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tmdto {

/// Write via temp file + rename so interrupted runs never leave partial files.
void atomic_write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void atomic_write_file(const std::filesystem::path& path, const std::string& text);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

}  // namespace tmdto

#endif
