#include <gtest/gtest.h>

#include <filesystem>

#include "bilocal/io/state_file.hpp"
#include "helpers.hpp"

using namespace bilocal;
using namespace bilocal::testing;

TEST(Format, Round15IsIdempotent) {
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20, 20));
    const double r = io::round15(v);
    EXPECT_EQ(io::round15(r), r);
    EXPECT_EQ(io::format15(r), io::format15(v));
  }
  EXPECT_EQ(io::format15(-0.0), "0");
  EXPECT_EQ(io::format15(std::sqrt(2.0)), "1.4142135623731");
  EXPECT_EQ(io::format15(0.1), "0.1");
}

TEST(Format, DigestIsStable) {
  EXPECT_EQ(io::digest(""), "fnv1a64:cbf29ce484222325");
  EXPECT_EQ(io::digest("a"), "fnv1a64:af63dc4c8601ec8c");
}

TEST(Format, AtomicWriteAndErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "bilocal_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.txt").string();
  io::write_file_atomic(path, "one");
  io::write_file_atomic(path, "two");
  EXPECT_EQ(io::read_file(path), "two");
  try {
    io::write_file_atomic((dir / "missing" / "y.txt").string(), "z");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
  EXPECT_THROW(io::read_file((dir / "nope").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST(StateFile, ParsesKetAndDensity) {
  const io::StateFile k = io::parse_state(R"({"qubits": 1, "kind": "ket", "data": [[0.6, 0], [0, 0.8]]})");
  ASSERT_TRUE(k.ket.has_value());
  EXPECT_NEAR(std::abs(k.rho.matrix()(0, 1) - Complex(0, -0.48)), 0.0, 1e-15);
  const io::StateFile d =
      io::parse_state(R"({"qubits": 1, "kind": "density", "data": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]], "label": "mm"})");
  EXPECT_FALSE(d.ket.has_value());
  EXPECT_EQ(d.label, "mm");
}

TEST(StateFile, ErrorCodes) {
  auto code = [](const char* text) {
    try {
      io::parse_state(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;  // no error
  };
  EXPECT_EQ(code("{"), ErrorCode::Parse);
  EXPECT_EQ(code(R"({"qubits": 1, "kind": "ket"})"), ErrorCode::Parse);
  EXPECT_EQ(code(R"({"qubits": 1, "kind": "ket", "data": [[1, 0]]})"), ErrorCode::Parse);
  EXPECT_EQ(code(R"({"qubits": 1, "kind": "blob", "data": []})"), ErrorCode::Parse);
  EXPECT_EQ(code(R"({"qubits": 9, "kind": "ket", "data": []})"), ErrorCode::Parse);
  EXPECT_EQ(code(R"({"qubits": 1, "kind": "ket", "data": [[0.9, 0], [0, 0]]})"), ErrorCode::NotNormalized);
  EXPECT_EQ(code(R"({"qubits": 1, "kind": "density", "data": [[[1,0],[1,0]],[[0,0],[0,0]]]})"),
            ErrorCode::InvalidState);
}

TEST(StateFile, SerializeRoundTrip) {
  for (const char* spec : {"bell", "product", "classical", "mixed", "random:5", "random:6:1"}) {
    const io::StateFile a = io::generate_state(spec, 2);
    const std::string text = io::serialize_state(a);
    const io::StateFile b = io::parse_state(text);
    EXPECT_EQ(io::serialize_state(b), text) << spec;
    EXPECT_LE(max_abs_diff(a.rho.matrix(), b.rho.matrix()), 1e-14) << spec;
  }
}

TEST(Generators, Values) {
  EXPECT_TRUE(near_matrix(io::generate_state("bell", 2).rho.matrix(), bell().matrix(), 1e-15));
  EXPECT_TRUE(near_matrix(io::generate_state("ghz", 3).rho.matrix(), ghz3().matrix(), 1e-15));
  const io::StateFile w = io::generate_state("w:pi/2,pi/4", 3);
  EXPECT_TRUE(near_matrix(w.rho.matrix(), density_from_ket(w_state({kPi / 2, kPi / 4})).matrix(), 1e-15));
  EXPECT_TRUE(near_matrix(io::generate_state("random:3:2", 3).rho.matrix(), random_density(3, 2, 3).matrix(), 0.0));
  EXPECT_THROW(io::generate_state("bell", 3), Error);
  EXPECT_THROW(io::generate_state("w:1", 3), Error);
  EXPECT_THROW(io::generate_state("random:x", 2), Error);
  EXPECT_THROW(io::generate_state("nope", 2), Error);
}

TEST(ParseAngle, Forms) {
  EXPECT_DOUBLE_EQ(io::parse_angle("0.3"), 0.3);
  EXPECT_DOUBLE_EQ(io::parse_angle("pi"), kPi);
  EXPECT_DOUBLE_EQ(io::parse_angle("pi/4"), kPi / 4);
  EXPECT_DOUBLE_EQ(io::parse_angle("3*pi/8"), 3 * kPi / 8);
  EXPECT_DOUBLE_EQ(io::parse_angle("-pi/2"), -kPi / 2);
  EXPECT_THROW(io::parse_angle("pie"), Error);
  EXPECT_THROW(io::parse_angle(""), Error);
}
