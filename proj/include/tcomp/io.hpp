#pragma once

#include "tcomp/observation.hpp"
#include "tcomp/tensor.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace tcomp::io {

/// Malformed or unreadable input.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// TNSR1 binary tensor file:
//   "TNSR1\n"
//   "k d_1 ... d_k\n"               ASCII header
//   prod(d) little-endian float64    storage order, last index fastest
void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);
void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

// Observation CSV: header "i_0,...,i_{k-1},y", 0-based indices, y printed in
// shortest round-trip form.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in, const Shape& dims);
void write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path, const Shape& dims);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

} // namespace tcomp::io
