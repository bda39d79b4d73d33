#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gibbsrec/error.hpp"
#include "gibbsrec/qcore.hpp"

// Interchange document for matrices and vectors:
//
//   { "n": 2, "re": [0.25, 0, 0, 0.75], "im": [0, 0, 0, 0] }
//
// `re`/`im` are row-major; n*n entries describe a matrix, n entries a vector.
// `im` may be omitted for real data.

namespace gibbsrec::io {

struct Document {
  Index n = 0;
  std::vector<Complex> values;

  [[nodiscard]] bool is_matrix() const {
    return static_cast<Index>(values.size()) == n * n && n > 1;
  }
  [[nodiscard]] bool is_vector() const { return static_cast<Index>(values.size()) == n; }
};

namespace detail {

inline std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline std::vector<double> number_array(const nlohmann::json& doc, const char* key) {
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw Error(ErrorKind::Parse, std::string("`") + key + "` must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw Error(ErrorKind::Parse,
                  std::string("`") + key + "[" + std::to_string(i) + "]` is not a number");
    }
    out.push_back(arr[i].get<double>());
  }
  return out;
}

}  // namespace detail

inline Document parse_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(ErrorKind::Parse, detail::position(text, at) + ": malformed document");
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("re")) {
    throw Error(ErrorKind::Parse, "document needs fields `n` and `re`");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw Error(ErrorKind::Parse, "`n` must be a positive integer");
  }
  Document out;
  out.n = static_cast<Index>(doc["n"].get<long long>());
  const auto re = detail::number_array(doc, "re");
  const auto im = doc.contains("im") ? detail::number_array(doc, "im")
                                     : std::vector<double>(re.size(), 0.0);
  if (re.size() != im.size()) {
    throw Error(ErrorKind::Parse, "`re` and `im` lengths differ");
  }
  const auto len = static_cast<Index>(re.size());
  if (len != out.n && len != out.n * out.n) {
    throw Error(ErrorKind::Parse, "`re` must hold n or n*n entries, found " + std::to_string(len));
  }
  out.values.reserve(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) out.values.emplace_back(re[i], im[i]);
  return out;
}

inline Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document(buf.str());
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.message());
  }
}

inline Matrix to_matrix(const Document& doc) {
  if (static_cast<Index>(doc.values.size()) != doc.n * doc.n) {
    throw Error(ErrorKind::Parse, "document does not hold an n x n matrix");
  }
  Matrix m(doc.n, doc.n);
  for (Index i = 0; i < doc.n; ++i) {
    for (Index j = 0; j < doc.n; ++j) m(i, j) = doc.values[static_cast<std::size_t>(i * doc.n + j)];
  }
  return m;
}

inline Vector to_vector(const Document& doc) {
  if (static_cast<Index>(doc.values.size()) != doc.n) {
    throw Error(ErrorKind::Parse, "document does not hold a length-n vector");
  }
  Vector v(doc.n);
  for (Index i = 0; i < doc.n; ++i) v(i) = doc.values[static_cast<std::size_t>(i)];
  return v;
}

/// Finite doubles as numbers, infinities as the strings "+inf" / "-inf".
inline nlohmann::json real_json(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  return x;
}

inline nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(real_json(m(i, j).real()));
      im.push_back(real_json(m(i, j).imag()));
    }
  }
  return {{"n", m.rows()}, {"re", re}, {"im", im}};
}

inline nlohmann::json real_matrix_json(const RealMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) re.push_back(real_json(m(i, j)));
  }
  return {{"n", m.rows()}, {"re", re}};
}

inline nlohmann::json vector_json(const Vector& v) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(real_json(v(i).real()));
    im.push_back(real_json(v(i).imag()));
  }
  return {{"n", v.size()}, {"re", re}, {"im", im}};
}

}  // namespace gibbsrec::io
