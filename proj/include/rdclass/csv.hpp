#pragma once

// CSV writers and readers for the three curve formats. Numbers use 9
// significant digits (printf "%.9g"); a missing value is an empty field.
// Writing a parsed file reproduces it byte for byte.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rdclass/binary.hpp"
#include "rdclass/enumeration.hpp"
#include "rdclass/ib.hpp"

namespace rdclass {

/// Malformed CSV input; the message carries the 1-based line number.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kBinaryCurveHeader = "p2,error_probability,mutual_information_bits";
inline constexpr std::string_view kSweepHeader =
    "budget,mutual_information_bits,achieved_cost,decoder_map,status";
inline constexpr std::string_view kIBHeader = "beta,mutual_information_bits,achieved_cost,converged";

/// "%.9g", or "" for NaN.
std::string format_number(double value);
double parse_number(std::string_view field);  // "" -> NaN

/// Decoder labels joined by '|', e.g. "y1|y3".
std::string format_decoder(const DecoderMap& decoder, const std::vector<std::string>& names);
DecoderMap parse_decoder(std::string_view field, const std::vector<std::string>& names);

void write_binary_curve(std::ostream& out, const std::vector<BinaryTradeoffPoint>& points);
std::vector<BinaryTradeoffPoint> read_binary_curve(std::istream& in);

/// Rows that are not optimal leave mi, cost and decoder empty.
void write_sweep(std::ostream& out, const std::vector<CurvePoint>& points,
                 const std::vector<std::string>& label_names);
std::vector<CurvePoint> read_sweep(std::istream& in, const std::vector<std::string>& label_names);

struct IBRow {
  double beta = 0.0;
  double mi = 0.0;
  double cost = 0.0;
  bool converged = false;

  friend bool operator==(const IBRow&, const IBRow&) = default;
};

void write_ib(std::ostream& out, const std::vector<IBRow>& rows);
std::vector<IBRow> ib_rows(const std::vector<IBPoint>& points);
std::vector<IBRow> read_ib(std::istream& in);

}  // namespace rdclass
