#ifndef MINTERP_IO_HPP
#define MINTERP_IO_HPP

#include <iosfwd>
#include <string>

#include "minterp/sip_core.hpp"

namespace minterp {
namespace io {

/// "a+bi" with shortest round-trip precision; pure reals drop the imaginary
/// part, pure imaginaries drop the real part ("0" for zero).
std::string format_complex(Complex z);

/// Inverse of format_complex; also accepts plain reals, "i", "-i", "2i",
/// and exponent notation in either part. Throws std::invalid_argument.
Complex parse_complex(const std::string& text);

/// Comma-separated matrix of complex entries, one row per line. Blank lines
/// and lines starting with '#' are skipped. Throws on ragged rows.
MatrixXcd read_complex_csv(std::istream& in);
MatrixXcd read_complex_csv_file(const std::string& path);

/// Real signal, one sample per line (same comment rules).
VectorXd read_signal(std::istream& in);
VectorXd read_signal_file(const std::string& path);

void write_complex_csv(std::ostream& out, const MatrixXcd& m);

}  // namespace io
}  // namespace minterp

#endif
