#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "rdclass/csv.hpp"

using namespace rdclass;

TEST_CASE("number formatting") {
  CHECK(format_number(0.34) == "0.34");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(0.531004406410718778) == "0.531004406");
  CHECK(format_number(std::nan("")) == "");
  CHECK(std::isnan(parse_number("")));
  CHECK(parse_number("1e-05") == 1e-5);
  CHECK_THROWS_AS(parse_number("0.3x"), CsvError);
}

TEST_CASE("decoder fields") {
  const std::vector<std::string> names{"y1", "y2", "y3"};
  CHECK(format_decoder(DecoderMap{{0, 2}}, names) == "y1|y3");
  CHECK(parse_decoder("y2|y2|y1", names) == DecoderMap{{1, 1, 0}});
  CHECK_THROWS_AS(parse_decoder("y1|y4", names), CsvError);
}

TEST_CASE("binary curve file") {
  std::ostringstream out;
  write_binary_curve(out, binary_curve(0.3, 21));
  const std::string text = out.str();
  CHECK(text.rfind("p2,error_probability,mutual_information_bits\n0,0.3,1\n", 0) == 0);
  CHECK(text.find("\n0.1,0.34,0.531004406\n") != std::string::npos);
  CHECK(text.ends_with("\n0.5,0.5,0\n"));

  std::istringstream in(text);
  const auto parsed = read_binary_curve(in);
  REQUIRE(parsed.size() == 21);
  std::ostringstream again;
  write_binary_curve(again, parsed);
  CHECK(again.str() == text);
}

TEST_CASE("sweep file") {
  const std::vector<std::string> names{"y1", "y2"};
  std::vector<CurvePoint> points(3);
  points[0] = {0.2, SolveStatus::infeasible, std::nan(""), std::nan(""), std::nullopt};
  points[1] = {0.34, SolveStatus::optimal, 0.5310043981234, 0.3400000012, DecoderMap{{0, 1}}};
  points[2] = {0.5, SolveStatus::numerical_failure, std::nan(""), std::nan(""), std::nullopt};
  std::ostringstream out;
  write_sweep(out, points, names);
  CHECK(out.str() ==
        "budget,mutual_information_bits,achieved_cost,decoder_map,status\n"
        "0.2,,,,infeasible\n"
        "0.34,0.531004398,0.340000001,y1|y2,optimal\n"
        "0.5,,,,numerical-failure\n");

  std::istringstream in(out.str());
  const auto parsed = read_sweep(in, names);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[0].status == SolveStatus::infeasible);
  CHECK(std::isnan(parsed[0].mi));
  CHECK(parsed[1].mi == 0.531004398);
  CHECK(*parsed[1].decoder == DecoderMap{{0, 1}});
  std::ostringstream again;
  write_sweep(again, parsed, names);
  CHECK(again.str() == out.str());
}

TEST_CASE("ib file") {
  const std::vector<IBRow> rows{{0.0, 0.0, 0.25005, true}, {1000.0, 0.992774454, 0.250005, false}};
  std::ostringstream out;
  write_ib(out, rows);
  CHECK(out.str() ==
        "beta,mutual_information_bits,achieved_cost,converged\n"
        "0,0,0.25005,true\n"
        "1000,0.992774454,0.250005,false\n");
  std::istringstream in(out.str());
  CHECK(read_ib(in) == rows);
}

TEST_CASE("malformed files report the line") {
  std::istringstream wrong_header("p2,pe,mi\n");
  CHECK_THROWS_AS(read_binary_curve(wrong_header), CsvError);
  std::istringstream short_row("beta,mutual_information_bits,achieved_cost,converged\n1,2\n");
  CHECK_THROWS_WITH_AS(read_ib(short_row), doctest::Contains("line 2"), CsvError);
  std::istringstream bad_status(
      "budget,mutual_information_bits,achieved_cost,decoder_map,status\n0.1,,,,maybe\n");
  CHECK_THROWS_AS(read_sweep(bad_status, {"y1"}), CsvError);
}

TEST_CASE("random curves survive a write-read-write cycle") {
  PortableRng rng(4);
  std::vector<IBRow> rows;
  for (int i = 0; i < 200; ++i)
    rows.push_back({rng.uniform() * 1000.0, rng.uniform() * 1e-7, rng.uniform(), (i % 3) == 0});
  std::ostringstream first;
  write_ib(first, rows);
  std::istringstream in(first.str());
  const auto parsed = read_ib(in);
  std::ostringstream second;
  write_ib(second, parsed);
  CHECK(second.str() == first.str());
  std::istringstream in2(second.str());
  CHECK(read_ib(in2) == parsed);
}
