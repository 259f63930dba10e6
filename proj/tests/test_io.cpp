#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sdpi/io.hpp"

namespace sdpi {
namespace {

TEST(ParseJoint, RationalStringsAndNumbers) {
  const auto j = parse_joint_json(R"({
    "x_labels": ["0", "1"],
    "y_labels": ["0", "E", "1"],
    "pxy": [["1/3", "1/6", 0], [0, 0.25, "1/4"]]
  })");
  EXPECT_EQ(j.y_labels()[1], "E");
  EXPECT_DOUBLE_EQ(j.pxy()(0, 0), 1.0 / 3);
  EXPECT_DOUBLE_EQ(j.pxy()(1, 2), 0.25);
}

TEST(ParseJoint, SyntaxErrorReportsLineAndColumn) {
  try {
    parse_joint_json("{\n  \"x_labels\": [\"0\",\n  oops ]\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("3:"), std::string::npos) << e.what();
  }
}

TEST(ParseJoint, SchemaAndValidationErrors) {
  auto code_of = [](const char* text) {
    try {
      parse_joint_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NumericalFailure;
  };
  EXPECT_EQ(code_of(R"({"x_labels": ["a"], "pxy": [[1]]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"x_labels": ["a","b"], "y_labels": ["c"], "pxy": [[1]]})"), ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of(R"({"x_labels": ["a"], "y_labels": ["c"], "pxy": [["1/0"]]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"x_labels": ["a"], "y_labels": ["c"], "pxy": [["x"]]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"x_labels": ["a","b"], "y_labels": ["c","d"], "pxy": [[0.5,0.5],[0,0]]})"),
            ErrorCode::ZeroMarginal);
  EXPECT_EQ(code_of(R"({"x_labels": ["a","b"], "y_labels": ["c","d"], "pxy": [[0.5,0.4],[0,0.2]]})"),
            ErrorCode::SumNotOne);
}

TEST(ParseJoint, RoundTripsThroughJson) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto j = oracle::random_joint(rng, 1 + trial % 4, 1 + trial % 3, true);
    const auto back = parse_joint_json(joint_to_json(j));
    EXPECT_LT((back.pxy() - j.pxy()).cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_EQ(back.x_labels(), j.x_labels());
  }
}

TEST(Builtins, Shapes) {
  EXPECT_TRUE(is_builtin("fig2"));
  EXPECT_TRUE(is_builtin("bsc:0.1"));
  EXPECT_FALSE(is_builtin("fig3"));
  EXPECT_EQ(builtin_joint("bec:0.25").size_y(), 3);
  EXPECT_DOUBLE_EQ(builtin_joint("bsc:0.1").pxy()(0, 1), 0.05);
  EXPECT_THROW(builtin_joint("bsc:1.5"), Error);
  EXPECT_THROW(builtin_joint("bec:0"), Error);
  EXPECT_THROW(load_joint("/nonexistent/file.json"), Error);
}

TEST(FormatSig9, FixedSignificantDigits) {
  EXPECT_EQ(format_sig9(0.6315172029168971), "0.631517203");
  EXPECT_EQ(format_sig9(1.0), "1");
  EXPECT_EQ(format_sig9(1e-8), "1e-08");
  EXPECT_EQ(format_sig9(12345.678901234), "12345.6789");
}

}  // namespace
}  // namespace sdpi
