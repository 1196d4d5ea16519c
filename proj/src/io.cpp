#include "tcomp/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace tcomp::io {

namespace {

constexpr std::string_view kMagic = "TNSR1\n";
constexpr std::size_t kMaxHeader = 4096;
constexpr std::size_t kMaxOrder = 64;

std::uint64_t to_little_endian(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i)
            r = (r << 8) | ((v >> (8 * i)) & 0xff);
        return r;
    }
    return v;
}

std::size_t parse_size(std::string_view token, const char* what)
{
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
        throw FormatError(std::string(what) + ": cannot parse integer '" + std::string(token) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode)
{
    std::ofstream f(path, mode);
    if (!f)
        throw FormatError("cannot open '" + path.string() + "' for writing");
    return f;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode)
{
    std::ifstream f(path, mode);
    if (!f)
        throw FormatError("cannot open '" + path.string() + "' for reading");
    return f;
}

} // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{})
        throw std::runtime_error("format_double failed");
    return std::string(buf.data(), ptr);
}

void write_tensor(std::ostream& out, const Tensor& t)
{
    std::string header(kMagic);
    header += std::to_string(t.order());
    for (std::size_t d : t.dims())
        header += ' ' + std::to_string(d);
    header += '\n';
    out << header;
    for (double v : t.values()) {
        std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
        out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!out)
        throw FormatError("failed writing tensor");
}

Tensor read_tensor(std::istream& in)
{
    std::array<char, kMagic.size()> magic{};
    in.read(magic.data(), magic.size());
    if (!in || std::string_view(magic.data(), magic.size()) != kMagic)
        throw FormatError("bad magic: not a TNSR1 file");

    std::string header;
    char c = 0;
    while (in.get(c) && c != '\n') {
        header.push_back(c);
        if (header.size() > kMaxHeader)
            throw FormatError("TNSR1 header line too long");
    }
    if (c != '\n')
        throw FormatError("truncated TNSR1 header");

    const auto tokens = split(header, ' ');
    const std::size_t k = parse_size(tokens.front(), "TNSR1 order");
    if (k < 2 || k > kMaxOrder)
        throw FormatError("TNSR1 order out of range");
    if (tokens.size() != k + 1)
        throw FormatError("TNSR1 header lists " + std::to_string(tokens.size() - 1) + " dimensions, expected "
                          + std::to_string(k));
    Shape dims;
    std::size_t total = 1;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t d = parse_size(tokens[j + 1], "TNSR1 dimension");
        if (d == 0)
            throw FormatError("TNSR1 dimension must be positive");
        if (total > std::numeric_limits<std::size_t>::max() / 8 / d)
            throw FormatError("TNSR1 dimensions overflow");
        total *= d;
        dims.push_back(d);
    }

    std::vector<double> values(total);
    for (double& v : values) {
        std::uint64_t bits = 0;
        if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits))
            throw FormatError("TNSR1 payload truncated");
        v = std::bit_cast<double>(to_little_endian(bits));
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError("TNSR1 payload longer than header dimensions");
    try {
        return Tensor(std::move(dims), std::move(values));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("TNSR1: ") + e.what());
    }
}

void write_tensor(const std::filesystem::path& path, const Tensor& t)
{
    auto f = open_out(path, std::ios::binary | std::ios::trunc);
    write_tensor(f, t);
}

Tensor read_tensor(const std::filesystem::path& path)
{
    auto f = open_in(path, std::ios::binary);
    return read_tensor(f);
}

void write_dataset(std::ostream& out, const Dataset& data)
{
    std::string line;
    for (std::size_t j = 0; j < data.order(); ++j)
        line += "i_" + std::to_string(j) + ',';
    out << line << "y\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        line.clear();
        for (std::uint32_t c : data.index(i))
            line += std::to_string(c) + ',';
        line += format_double(data.value(i));
        line += '\n';
        out << line;
    }
    if (!out)
        throw FormatError("failed writing observations");
}

Dataset read_dataset(std::istream& in, const Shape& dims)
{
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("observation CSV is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    std::string expected;
    for (std::size_t j = 0; j < dims.size(); ++j)
        expected += "i_" + std::to_string(j) + ",";
    expected += "y";
    if (line != expected)
        throw FormatError("observation CSV header '" + line + "' does not match '" + expected + "'");

    Dataset data(dims);
    MultiIndex omega(dims.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto fields = split(line, ',');
        if (fields.size() != dims.size() + 1)
            throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(dims.size() + 1)
                              + " fields");
        for (std::size_t j = 0; j < dims.size(); ++j)
            omega[j] = parse_size(fields[j], "observation index");
        double y = 0.0;
        const std::string_view yf = fields.back();
        const auto [ptr, ec] = std::from_chars(yf.data(), yf.data() + yf.size(), y);
        if (ec != std::errc{} || ptr != yf.data() + yf.size() || yf.empty())
            throw FormatError("line " + std::to_string(lineno) + ": cannot parse value '" + std::string(yf) + "'");
        try {
            data.add(omega, y);
        } catch (const std::exception& e) {
            throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return data;
}

void write_dataset(const std::filesystem::path& path, const Dataset& data)
{
    auto f = open_out(path, std::ios::trunc);
    write_dataset(f, data);
}

Dataset read_dataset(const std::filesystem::path& path, const Shape& dims)
{
    auto f = open_in(path, std::ios::in);
    return read_dataset(f, dims);
}

} // namespace tcomp::io
