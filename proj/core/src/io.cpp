#include "minterp/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace minterp {
namespace io {

namespace {

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_real(const std::string& s) {
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: '" + s + "'");
  return v;
}

// Coefficient of an imaginary term with the trailing 'i' removed: "", "+",
// "-" mean 1, +1, -1.
double parse_imag_coeff(const std::string& s) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_real(s);
}

}  // namespace

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  const std::string im = format_real(z.imag()) + "i";
  if (z.real() == 0.0) return im;
  if (z.imag() < 0.0) return format_real(z.real()) + im;
  return format_real(z.real()) + "+" + im;
}

Complex parse_complex(const std::string& text) {
  std::string s = trim(text);
  std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  const char tail = s.back();
  if (tail != 'i' && tail != 'j') return Complex(parse_real(s), 0.0);

  s.pop_back();
  // Split at the last top-level sign (one not directly after an exponent
  // marker and not leading).
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return Complex(0.0, parse_imag_coeff(s));
  return Complex(parse_real(s.substr(0, split)),
                 parse_imag_coeff(s.substr(split)));
}

MatrixXcd read_complex_csv(std::istream& in) {
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<Complex> row;
    std::stringstream ls(t);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_complex(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("csv: ragged rows");
    rows.push_back(std::move(row));
  }
  MatrixXcd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

MatrixXcd read_complex_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_complex_csv(in);
}

VectorXd read_signal(std::istream& in) {
  std::vector<double> samples;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    samples.push_back(parse_real(t));
  }
  VectorXd v(samples.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = samples[i];
  return v;
}

VectorXd read_signal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_signal(in);
}

void write_complex_csv(std::ostream& out, const MatrixXcd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_complex(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace io
}  // namespace minterp
