#include "edgecert/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace edgecert {

namespace {

// 17 significant digits round-trip every double exactly.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_header(std::ostream& os, const HilbertDims& dims, const char* kind) {
  os << "locals:";
  for (int l : dims.locals) os << ' ' << l;
  os << "\ncut: " << dims.cut << "\nkind: " << kind << "\ndata:\n";
}

std::string next_content_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return line;
  }
  throw std::runtime_error("state record: unexpected end of input");
}

std::string expect_field(std::istream& is, const std::string& name) {
  std::string line = next_content_line(is);
  const std::string prefix = name + ":";
  if (line.rfind(prefix, 0) != 0) {
    throw std::runtime_error("state record: expected field '" + name + "', got: " + line);
  }
  return line.substr(prefix.size());
}

}  // namespace

void write_state(std::ostream& os, const Ket& psi) {
  write_header(os, psi.dims, "ket");
  for (long i = 0; i < psi.amps.size(); ++i) {
    os << fmt(psi.amps(i).real()) << ' ' << fmt(psi.amps(i).imag()) << '\n';
  }
}

void write_state(std::ostream& os, const Operator& op) {
  write_header(os, op.dims, "operator");
  for (long i = 0; i < op.mat.rows(); ++i) {
    for (long j = 0; j < op.mat.cols(); ++j) {
      if (j) os << ' ';
      os << fmt(op.mat(i, j).real()) << ' ' << fmt(op.mat(i, j).imag());
    }
    os << '\n';
  }
}

void write_state_file(const std::string& path, const StateRecord& record) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  std::visit([&os](const auto& s) { write_state(os, s); }, record);
  if (!os) throw std::ios_base::failure("write failed: " + path);
}

StateRecord read_state(std::istream& is) {
  std::vector<int> locals;
  {
    std::istringstream ls(expect_field(is, "locals"));
    int v;
    while (ls >> v) locals.push_back(v);
  }
  int cut = 0;
  {
    std::istringstream ls(expect_field(is, "cut"));
    if (!(ls >> cut)) throw std::runtime_error("state record: malformed cut field");
  }
  std::string kind;
  {
    std::istringstream ls(expect_field(is, "kind"));
    ls >> kind;
  }
  if (kind != "ket" && kind != "operator") {
    throw std::runtime_error("state record: kind must be 'ket' or 'operator', got '" + kind + "'");
  }
  expect_field(is, "data");

  const HilbertDims dims = make_dims(locals, cut);
  const long n = dims.ambient();
  if (kind == "ket") {
    Vector amps(n);
    for (long i = 0; i < n; ++i) {
      std::istringstream ls(next_content_line(is));
      double re, im;
      if (!(ls >> re >> im)) throw std::runtime_error("state record: malformed ket data row");
      amps(i) = Complex(re, im);
    }
    return Ket(std::move(amps), dims);
  }
  Matrix m(n, n);
  for (long i = 0; i < n; ++i) {
    std::istringstream ls(next_content_line(is));
    for (long j = 0; j < n; ++j) {
      double re, im;
      if (!(ls >> re >> im)) throw std::runtime_error("state record: malformed operator data row");
      m(i, j) = Complex(re, im);
    }
  }
  const bool herm = (m - m.adjoint()).cwiseAbs().maxCoeff() <= default_tolerances().construction;
  return Operator(std::move(m), dims, herm);
}

StateRecord read_state_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot open for reading: " + path);
  return read_state(is);
}

}  // namespace edgecert
