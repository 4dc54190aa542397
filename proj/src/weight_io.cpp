#include "ousg/weight_io.hpp"

#include <bit>

#include "ousg/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "weight files are little-endian; big-endian hosts need byte swapping");

namespace ousg {

WeightWriter::WeightWriter(const std::string& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw PersistenceError("cannot open weight file for writing: " + path);
}

void WeightWriter::bytes(const char* data, std::size_t n) {
  out_.write(data, static_cast<std::streamsize>(n));
}

void WeightWriter::u32(std::uint32_t v) {
  bytes(reinterpret_cast<const char*>(&v), sizeof v);
}

void WeightWriter::f64_array(const Vec& values) {
  bytes(reinterpret_cast<const char*>(values.data()), values.size() * sizeof(double));
}

void WeightWriter::finish() {
  out_.flush();
  if (!out_) throw PersistenceError("write failed for weight file: " + path_);
}

WeightReader::WeightReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw PersistenceError("cannot open weight file: " + path);
}

void WeightReader::bytes(char* data, std::size_t n, const std::string& field) {
  in_.read(data, static_cast<std::streamsize>(n));
  if (in_.gcount() != static_cast<std::streamsize>(n))
    throw PersistenceError("truncated weight file " + path_ + " while reading " + field);
}

std::uint32_t WeightReader::u32(const std::string& field) {
  std::uint32_t v = 0;
  bytes(reinterpret_cast<char*>(&v), sizeof v, field);
  return v;
}

void WeightReader::f64_array(Vec& values, std::size_t n, const std::string& field) {
  values.resize(n);
  bytes(reinterpret_cast<char*>(values.data()), n * sizeof(double), field);
}

bool WeightReader::at_end() {
  return in_.peek() == std::ifstream::traits_type::eof();
}

}  // namespace ousg
