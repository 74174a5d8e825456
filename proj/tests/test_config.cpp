#include <gtest/gtest.h>

#include <sstream>

#include "mems/config.hpp"

using namespace mems;

TEST(Config, ParsesKeysCommentsAndBlanks) {
  std::istringstream in(
      "# device\n"
      "beta = 2\n"
      "\n"
      "sigma=0.25\n"
      "  lambda =1.5  \n"
      "nr=48\n"
      "method=newton\n"
      "out_dir=results/a\n");
  const RunConfig c = parse_config(in);
  EXPECT_EQ(c.params.beta, 2.0);
  EXPECT_EQ(c.params.sigma, 0.25);
  EXPECT_EQ(c.params.lambda, 1.5);
  EXPECT_EQ(c.nr, 48);
  EXPECT_EQ(c.method, "newton");
  EXPECT_EQ(c.out_dir, "results/a");
  EXPECT_EQ(c.neta, RunConfig{}.neta);
}

TEST(Config, UnknownKeyIsAnError) {
  std::istringstream in("beta=1\ngamma=2\n");
  EXPECT_THROW(parse_config(in), ConfigError);
}

TEST(Config, MalformedLinesAreErrors) {
  std::istringstream a("beta 1\n");
  EXPECT_THROW(parse_config(a), ConfigError);
  std::istringstream b("beta=1x\n");
  EXPECT_THROW(parse_config(b), ConfigError);
  std::istringstream c("nr=3.5\n");
  EXPECT_THROW(parse_config(c), ConfigError);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/mems.cfg"), ConfigError); }

TEST(Config, ControlInvariants) {
  RunConfig c;
  EXPECT_NO_THROW(check_controls(c));
  c.nr = 15;
  EXPECT_THROW(check_controls(c), ConfigError);
  c = RunConfig{};
  c.neta = 8;
  EXPECT_THROW(check_controls(c), ConfigError);
  c = RunConfig{};
  c.tol = 0.0;
  EXPECT_THROW(check_controls(c), ConfigError);
  c.tol = 2e-4;
  EXPECT_THROW(check_controls(c), ConfigError);
  c.tol = 1e-4;
  EXPECT_NO_THROW(check_controls(c));
  c.method = "secant";
  EXPECT_THROW(check_controls(c), ConfigError);
}

TEST(Config, TextRoundTripsExactly) {
  RunConfig c;
  c.params.lambda = 0.1 + 0.2;
  c.params.eps = 1.0 / 3.0;
  c.tol = 3e-11;
  c.nr = 40;
  c.method = "newton";
  c.seed = 99;
  std::istringstream in(to_config_text(c));
  const RunConfig d = parse_config(in);
  EXPECT_EQ(d.params.lambda, c.params.lambda);
  EXPECT_EQ(d.params.eps, c.params.eps);
  EXPECT_EQ(d.tol, c.tol);
  EXPECT_EQ(d.nr, 40);
  EXPECT_EQ(d.method, "newton");
  EXPECT_EQ(d.seed, 99);
  EXPECT_EQ(to_config_text(d), to_config_text(c));
}
