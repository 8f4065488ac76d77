#include "rdclass/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

namespace rdclass {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw CsvError("line " + std::to_string(number_) + ": " + why);
  }

  void expect_header(std::string_view header) {
    std::string line;
    if (!next(line)) fail("missing header");
    if (line != header) fail("expected header '" + std::string(header) + "'");
  }

  std::vector<std::string_view> fields(const std::string& line, std::size_t count) const {
    auto f = split(line, ',');
    if (f.size() != count)
      fail("expected " + std::to_string(count) + " fields, got " + std::to_string(f.size()));
    return f;
  }

  double number(std::string_view field) const {
    try {
      return parse_number(field);
    } catch (const CsvError& e) {
      fail(e.what());
    }
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double parse_number(std::string_view field) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw CsvError("not a number: '" + std::string(field) + "'");
  return value;
}

std::string format_decoder(const DecoderMap& decoder, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t k = 0; k < decoder.size(); ++k) {
    if (k > 0) out += '|';
    out += names.at(decoder[k]);
  }
  return out;
}

DecoderMap parse_decoder(std::string_view field, const std::vector<std::string>& names) {
  DecoderMap decoder;
  for (const auto token : split(field, '|')) {
    std::size_t i = 0;
    while (i < names.size() && names[i] != token) ++i;
    if (i == names.size()) throw CsvError("unknown label '" + std::string(token) + "'");
    decoder.labels.push_back(i);
  }
  return decoder;
}

void write_binary_curve(std::ostream& out, const std::vector<BinaryTradeoffPoint>& points) {
  out << kBinaryCurveHeader << '\n';
  for (const auto& p : points)
    out << format_number(p.p2) << ',' << format_number(p.pe) << ',' << format_number(p.mi) << '\n';
}

std::vector<BinaryTradeoffPoint> read_binary_curve(std::istream& in) {
  LineReader reader(in);
  reader.expect_header(kBinaryCurveHeader);
  std::vector<BinaryTradeoffPoint> points;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 3);
    BinaryTradeoffPoint p;
    p.p2 = reader.number(f[0]);
    p.pe = reader.number(f[1]);
    p.mi = reader.number(f[2]);
    p.map_tie = p.p2 == 0.5;
    points.push_back(p);
  }
  return points;
}

void write_sweep(std::ostream& out, const std::vector<CurvePoint>& points,
                 const std::vector<std::string>& label_names) {
  out << kSweepHeader << '\n';
  for (const auto& p : points) {
    out << format_number(p.budget) << ',';
    if (p.status == SolveStatus::optimal && p.decoder) {
      out << format_number(p.mi) << ',' << format_number(p.achieved_budget) << ','
          << format_decoder(*p.decoder, label_names);
    } else {
      out << ",,";
    }
    out << ',' << to_string(p.status) << '\n';
  }
}

std::vector<CurvePoint> read_sweep(std::istream& in, const std::vector<std::string>& label_names) {
  LineReader reader(in);
  reader.expect_header(kSweepHeader);
  std::vector<CurvePoint> points;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 5);
    CurvePoint p;
    p.budget = reader.number(f[0]);
    if (f[4] == to_string(SolveStatus::optimal)) {
      p.status = SolveStatus::optimal;
    } else if (f[4] == to_string(SolveStatus::infeasible)) {
      p.status = SolveStatus::infeasible;
    } else if (f[4] == to_string(SolveStatus::numerical_failure)) {
      p.status = SolveStatus::numerical_failure;
    } else {
      reader.fail("unknown status '" + std::string(f[4]) + "'");
    }
    p.mi = reader.number(f[1]);
    p.achieved_budget = reader.number(f[2]);
    if (!f[3].empty()) {
      try {
        p.decoder = parse_decoder(f[3], label_names);
      } catch (const CsvError& e) {
        reader.fail(e.what());
      }
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<IBRow> ib_rows(const std::vector<IBPoint>& points) {
  std::vector<IBRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back({p.beta, p.mi_x, p.cost, p.converged});
  return rows;
}

void write_ib(std::ostream& out, const std::vector<IBRow>& rows) {
  out << kIBHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.beta) << ',' << format_number(r.mi) << ',' << format_number(r.cost)
        << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

std::vector<IBRow> read_ib(std::istream& in) {
  LineReader reader(in);
  reader.expect_header(kIBHeader);
  std::vector<IBRow> rows;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 4);
    IBRow r;
    r.beta = reader.number(f[0]);
    r.mi = reader.number(f[1]);
    r.cost = reader.number(f[2]);
    if (f[3] == "true") {
      r.converged = true;
    } else if (f[3] != "false") {
      reader.fail("converged must be true or false");
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace rdclass
