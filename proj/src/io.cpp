#include "specbound/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace specbound::core {

namespace {
constexpr char kMagic[4] = {'S', 'P', 'B', 'D'};
constexpr std::uint32_t kVersion = 1;

void check_finite(const DenseMatrix& m, const std::string& path) {
  if (!m.finite()) throw io_error("non-finite entry in " + path);
}
}  // namespace

DenseMatrix load_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);

  if (format == MatrixFormat::csv) {
    DenseMatrix m;
    std::string line;
    std::vector<double> row;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      row.clear();
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          std::size_t used = 0;
          double v = std::stod(cell, &used);
          while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
          if (used != cell.size()) throw std::invalid_argument(cell);
          row.push_back(v);
        } catch (const std::exception&) {
          throw io_error("parse failure in " + path + ": '" + cell + "'");
        }
      }
      if (m.cols == 0) m.cols = row.size();
      if (row.size() != m.cols)
        throw io_error("shape mismatch in " + path + ": ragged row " + std::to_string(m.rows + 1));
      m.a.insert(m.a.end(), row.begin(), row.end());
      ++m.rows;
    }
    if (m.rows == 0) throw io_error("empty matrix file " + path);
    check_finite(m, path);
    return m;
  }

  char magic[4];
  std::uint32_t version;
  std::uint64_t rows, cols;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw io_error("parse failure in " + path + ": bad magic");
  if (version != kVersion) throw io_error("parse failure in " + path + ": unsupported version");
  DenseMatrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.a.data()), static_cast<std::streamsize>(m.a.size() * 8));
  if (!in) throw io_error("shape mismatch in " + path + ": truncated data");
  check_finite(m, path);
  return m;
}

void save_matrix(const DenseMatrix& m, const std::string& path, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);

  if (format == MatrixFormat::csv) {
    char buf[32];
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", m.at(i, j));
        out << buf << (j + 1 < m.cols ? "," : "");
      }
      out << '\n';
    }
    return;
  }

  std::uint64_t rows = m.rows, cols = m.cols;
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), 4);
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  out.write(reinterpret_cast<const char*>(m.a.data()), static_cast<std::streamsize>(m.a.size() * 8));
  if (!out) throw io_error("write failure for " + path);
}

}  // namespace specbound::core
