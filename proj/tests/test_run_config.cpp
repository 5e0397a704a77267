#include <cstdio>
#include <fstream>

#include <gtest/gtest.h>

#include "run_config.hpp"

using unclab::InvalidInput;
using unclab::Json;
using namespace unclab::cli;

TEST(RunConfig, DefaultsAreValid) {
  EXPECT_NO_THROW(RunConfig{}.validate());
  EXPECT_EQ(run_config_from_json(Json::object()), RunConfig{});
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.eps = 1e-3;
  c.r_max = 3;
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.starts = 7;
  EXPECT_EQ(run_config_from_json(to_json(c)), c);
  EXPECT_EQ(run_config_from_json(to_json(RunConfig{})), RunConfig{});
}

TEST(RunConfig, PartialJsonKeepsBase) {
  RunConfig base;
  base.starts = 5;
  const RunConfig c = run_config_from_json(Json{{"eps", 0.5}}, base);
  EXPECT_EQ(c.eps, 0.5);
  EXPECT_EQ(c.starts, 5u);
}

TEST(RunConfig, RejectsBadValues) {
  EXPECT_THROW(run_config_from_json(Json{{"eps", -1.0}}), InvalidInput);
  EXPECT_THROW(run_config_from_json(Json{{"starts", 0}}), InvalidInput);
  EXPECT_THROW(run_config_from_json(Json{{"starts", 1.5}}), InvalidInput);
  EXPECT_THROW(run_config_from_json(Json{{"seed", -3}}), InvalidInput);
  EXPECT_THROW(run_config_from_json(Json{{"residual_tol", 0.0}}), InvalidInput);
  EXPECT_THROW(run_config_from_json(Json{{"unknown", 1}}), InvalidInput);
  EXPECT_THROW(run_config_from_json(Json::array()), InvalidInput);
}

TEST(RunConfig, MapsOntoSolverSettings) {
  RunConfig c;
  c.eps = 0.25;
  c.max_iter = 123;
  EXPECT_EQ(c.solver().eps, 0.25);
  EXPECT_EQ(c.solver().r_max, 0u);
  EXPECT_EQ(c.npa().max_iter, 123u);
}

TEST(RunConfig, LoadFromFile) {
  const std::string path = testing::TempDir() + "run_config_test.json";
  {
    std::ofstream f(path);
    f << R"({"seed": 42, "r_max": null})";
  }
  EXPECT_EQ(load_run_config(path).seed, 42u);
  {
    std::ofstream f(path);
    f << "{not json";
  }
  EXPECT_THROW(load_run_config(path), InvalidInput);
  std::remove(path.c_str());
  EXPECT_THROW(load_run_config(path), InvalidInput);
}
