#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "ousg/nn.hpp"

namespace ousg {

// Binary little-endian weight-file primitives. Failures throw
// PersistenceError naming the field being read or written.
class WeightWriter {
 public:
  explicit WeightWriter(const std::string& path);
  void bytes(const char* data, std::size_t n);
  void u32(std::uint32_t v);
  void f64_array(const Vec& values);
  void finish();

 private:
  std::ofstream out_;
  std::string path_;
};

class WeightReader {
 public:
  explicit WeightReader(const std::string& path);
  void bytes(char* data, std::size_t n, const std::string& field);
  std::uint32_t u32(const std::string& field);
  void f64_array(Vec& values, std::size_t n, const std::string& field);
  bool at_end();

 private:
  std::ifstream in_;
  std::string path_;
};

}  // namespace ousg
