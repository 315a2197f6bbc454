#include "hemeroteca/common/fileio.hpp"

#include <fstream>

#include "hemeroteca/common/error.hpp"

namespace hemeroteca {

namespace fs = std::filesystem;

void write_atomically(const fs::path& target, std::string_view content) {
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Internal, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error(ErrorCode::Internal, "write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

void append_line(const fs::path& file, std::string_view line) {
    std::ofstream out(file, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::Internal, "cannot append to " + file.string());
    out << line << '\n';
    if (!out.flush()) throw Error(ErrorCode::Internal, "write failed: " + file.string());
}

std::vector<std::string> read_lines(const fs::path& file) {
    std::vector<std::string> lines;
    std::ifstream in(file, std::ios::binary);
    if (!in) return lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace hemeroteca
