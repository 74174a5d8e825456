#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mems/io.hpp"
#include "support.hpp"

using namespace mems;

TEST(Io, FormatNumber) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Io, JsonObject) {
  JsonObject j;
  j.add("a", 1.5).add("b", 2).add("c", true).add("d", "x\"y").add("e", std::nan(""));
  const std::string s = j.str();
  EXPECT_LT(s.find("\"a\""), s.find("\"b\""));
  EXPECT_NE(s.find("\"b\": 2"), std::string::npos);
  EXPECT_NE(s.find("\"c\": true"), std::string::npos);
  EXPECT_NE(s.find("\"x\\\"y\""), std::string::npos);
  EXPECT_NE(s.find("\"e\": null"), std::string::npos);
  EXPECT_EQ(s.front(), '{');
}

TEST(Io, FieldCsvRoundTrip) {
  const auto g = mems::testing::radial(16);
  const PlateField u = PlateField::from(g, [](double r) { return std::sin(r) * (1.0 - r); });
  std::ostringstream out;
  write_field_csv(out, u, "phi1");
  EXPECT_EQ(out.str().substr(0, 7), "r,phi1\n");
  std::istringstream in(out.str());
  const auto [r, v] = read_field_csv(in);
  EXPECT_EQ(r, g->nodes());
  EXPECT_EQ(v, u.values);
}

TEST(Io, MalformedCsv) {
  std::istringstream bad("r,u\n0,1\nx,2\n");
  EXPECT_THROW(read_field_csv(bad), IoError);
  std::istringstream empty("");
  EXPECT_THROW(read_field_csv(empty), IoError);
}

TEST(Io, TraceAndEvolutionHeaders) {
  ContinuationTrace tr;
  tr.records.push_back({0.0, 0.0, 1, true, true, {}});
  tr.records.push_back({0.5, -0.04, 8, false, true, {}});
  std::ostringstream a;
  write_trace_csv(a, tr);
  EXPECT_EQ(a.str(), "lambda,u_min,iters,converged\n0,0,1,1\n0.5,-0.040000000000000001,8,0\n");
  EvolutionTrace ev;
  ev.times = {0.0};
  ev.u_min = {0.0};
  std::ostringstream b;
  write_evolution_csv(b, ev);
  EXPECT_EQ(b.str().substr(0, 21), "t,u_min,error,energy\n");
}

TEST(Io, FileErrors) {
  EXPECT_THROW(read_file("/nonexistent/dir/file"), IoError);
  EXPECT_THROW(write_file("/nonexistent/dir/file", "x"), IoError);
}
