#include "qrsmem/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include <boost/crc.hpp>

#include "qrsmem/errors.hpp"

namespace qrsmem {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw ConfigError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string file_crc32_hex(const std::filesystem::path& path) {
    const std::string data = read_text_file(path);
    boost::crc_32_type crc;
    crc.process_bytes(data.data(), data.size());
    std::ostringstream ss;
    ss << std::hex << std::setw(8) << std::setfill('0') << crc.checksum();
    return ss.str();
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace qrsmem
