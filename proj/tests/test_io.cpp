#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "gibbsrec/io.hpp"

namespace gibbsrec::io {
namespace {

const std::string kData = GIBBSREC_TEST_DATA;

TEST(ParseDocument, MatrixWithImaginaryPart) {
  const auto doc = read_document(kData + "/rho_complex.json");
  EXPECT_TRUE(doc.is_matrix());
  const Matrix m = to_matrix(doc);
  EXPECT_EQ(m(0, 1), Complex(0.2, -0.1));
  EXPECT_EQ(m(1, 0), Complex(0.2, 0.1));
  EXPECT_NO_THROW(validate_density(m));
}

TEST(ParseDocument, RealVectorWithoutIm) {
  const auto doc = read_document(kData + "/phi_plus.json");
  EXPECT_TRUE(doc.is_vector());
  const Vector v = to_vector(doc);
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  EXPECT_THROW(to_matrix(doc), Error);
}

TEST(ParseDocument, MalformedReportsPosition) {
  try {
    read_document(kData + "/malformed.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ParseDocument, StructuralErrors) {
  auto kind = [](std::string_view text) {
    try {
      parse_document(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind(R"({"re": [1]})"), ErrorKind::Parse);
  EXPECT_EQ(kind(R"({"n": 0, "re": []})"), ErrorKind::Parse);
  EXPECT_EQ(kind(R"({"n": 2, "re": [1, 0, 0]})"), ErrorKind::Parse);
  EXPECT_EQ(kind(R"({"n": 2, "re": [1, 0], "im": [0]})"), ErrorKind::Parse);
  EXPECT_EQ(kind(R"({"n": 2, "re": [1, "x"]})"), ErrorKind::Parse);
  EXPECT_THROW(read_document(kData + "/does_not_exist.json"), Error);
}

TEST(Serialize, RoundTripAndInfinity) {
  Matrix m(2, 2);
  m << Complex(0.25, 0.0), Complex(0.1, -0.2), Complex(0.1, 0.2), Complex(0.75, 0.0);
  const auto doc = parse_document(matrix_json(m).dump());
  EXPECT_EQ(to_matrix(doc), m);

  EXPECT_EQ(real_json(INFINITY).get<std::string>(), "+inf");
  EXPECT_EQ(real_json(-INFINITY).get<std::string>(), "-inf");
  EXPECT_EQ(real_json(0.5).get<double>(), 0.5);
}

}  // namespace
}  // namespace gibbsrec::io
