#include "loewner/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "loewner/text.hpp"

namespace loewner {

HermitianMatrix read_matrix(std::istream& in) {
  std::string first;
  if (!(in >> first)) throw ParseError("matrix file is empty");
  long dim = 0;
  try {
    dim = static_cast<long>(parse_double(first));
  } catch (const ParseError&) {
    throw ParseError("matrix file must start with its dimension");
  }
  if (dim < 1 || static_cast<double>(dim) != parse_double(first))
    throw ParseError("matrix dimension must be a positive integer, got '" +
                     first + "'");
  ComplexMatrix m(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) {
      std::string token;
      if (!(in >> token))
        throw ParseError("matrix file ended after " +
                         std::to_string(i * dim + j) + " of " +
                         std::to_string(dim * dim) + " entries");
      m(i, j) = parse_complex(token);
    }
  return make_hermitian(m);
}

HermitianMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

std::string write_matrix(const HermitianMatrix& m) {
  std::ostringstream out;
  out << m.dim() << "\n";
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      if (j) out << " ";
      out << format_complex(m.entries()(i, j));
    }
    out << "\n";
  }
  return out.str();
}

void write_matrix_file(const std::string& path, const HermitianMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << write_matrix(m);
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace loewner
