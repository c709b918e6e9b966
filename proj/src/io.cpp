#include "tmdto/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace tmdto {

namespace {

void write_all_or_throw(const std::filesystem::path& path, const char* data, std::size_t size) {
    const std::filesystem::path dir = path.parent_path();
    if (!dir.empty())
        std::filesystem::create_directories(dir);

    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(data, static_cast<std::streamsize>(size));
        out.flush();
        if (!out)
            throw std::runtime_error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

}  // namespace

void atomic_write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    write_all_or_throw(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void atomic_write_file(const std::filesystem::path& path, const std::string& text) {
    write_all_or_throw(path, text.data(), text.size());
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        bytes.insert(bytes.end(), buf, buf + in.gcount());
    return bytes;
}

std::string read_file_text(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

}  // namespace tmdto
