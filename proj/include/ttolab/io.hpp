/* Copyright 2026 The ttolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#ifndef TTOLAB_IO_HPP
#define TTOLAB_IO_HPP

// JSON and text conversions for the lab's value types, plus atomic file
// output. Complex numbers are [re, im] pairs in files and "a+bi" on the
// command line.

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttolab/error.hpp"
#include "ttolab/inner.hpp"
#include "ttolab/spectral.hpp"
#include "ttolab/symbols.hpp"
#include "ttolab/tto.hpp"

namespace ttolab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorCode::ParseError, "expected a number or an [re, im] pair, got " + j.dump());
}

namespace detail {

inline std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

inline double parse_real(std::string_view text, std::string_view context) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty number in '" + std::string(context) + "'");
  // std::from_chars rejects a leading '+'
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "bad number '" + std::string(text) + "' in '" + std::string(context) + "'");
  }
  return value;
}

}  // namespace detail

/// Parses "a", "bi", "a+bi", "a - b i", "i", "-i".
inline Complex parse_complex(std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {detail::parse_real(s, text), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return detail::parse_real(t, text);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {detail::parse_real(std::string_view(body).substr(0, split), text),
          imag_part(std::string_view(body).substr(split))};
}

/// Comma-separated list of complex numbers.
inline std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    out.push_back(parse_complex(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

/// A rate given as a number or as a "p/q" string.
inline double rate_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = detail::strip_spaces(j.get<std::string>());
    const auto slash = s.find('/');
    if (slash == std::string::npos) return detail::parse_real(s, s);
    const double p = detail::parse_real(std::string_view(s).substr(0, slash), s);
    const double q = detail::parse_real(std::string_view(s).substr(slash + 1), s);
    if (q == 0.0) throw Error(ErrorCode::ParseError, "zero denominator in rate '" + s + "'");
    return p / q;
  }
  throw Error(ErrorCode::ParseError, "rate must be a number or a 'p/q' string");
}

// ---------------------------------------------------------------------------
// Inner functions

inline std::vector<Complex> zeros_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "zeros must be an array");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& z : j) out.push_back(complex_from_json(z));
  return out;
}

inline Json to_json(const BlaschkeProduct& u) {
  Json zeros = Json::array();
  for (const auto& a : u.zeros()) zeros.push_back(to_json(a));
  return Json{{"zeros", zeros}, {"phase", to_json(u.phase())}};
}

inline BlaschkeProduct blaschke_from_json(const Json& j) {
  const Complex phase = j.contains("phase") ? complex_from_json(j.at("phase")) : Complex{1.0, 0.0};
  return make_blaschke(zeros_from_json(j.at("zeros")), phase);
}

// ---------------------------------------------------------------------------
// Symbols

inline Json to_json(const TrigPolynomial& p) {
  Json coeffs = Json::object();
  for (const auto& [n, c] : p.coefficients()) coeffs[std::to_string(n)] = to_json(c);
  return Json{{"type", "trig"}, {"coeffs", coeffs}};
}

inline TrigPolynomial trig_from_json(const Json& j) {
  const Json& coeffs = j.contains("coeffs") ? j.at("coeffs") : j;
  if (!coeffs.is_object()) throw Error(ErrorCode::ParseError, "trig coefficients must be an object");
  std::map<int, Complex> out;
  for (const auto& [key, value] : coeffs.items()) {
    int n = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), n);
    if (ec != std::errc{} || ptr != key.data() + key.size()) {
      throw Error(ErrorCode::ParseError, "bad Fourier index '" + key + "'");
    }
    out[n] += complex_from_json(value);
  }
  return TrigPolynomial(out);
}

inline Json to_json(const JumpSymbol& s) {
  Json jumps = Json::array();
  for (const auto& jump : s.jumps()) jumps.push_back(Json{{"theta", jump.theta}, {"height", to_json(jump.height)}});
  return Json{{"type", "jump"}, {"jumps", jumps}, {"background", to_json(s.background())}};
}

inline JumpSymbol jump_from_json(const Json& j) {
  std::vector<Jump> jumps;
  if (j.contains("jumps")) {
    for (const auto& item : j.at("jumps")) {
      const Complex h = item.contains("height") ? complex_from_json(item.at("height")) : Complex{1.0, 0.0};
      jumps.push_back(Jump{item.value("theta", 0.0), h});
    }
  }
  const TrigPolynomial background = j.contains("background") ? trig_from_json(j.at("background")) : TrigPolynomial{};
  return JumpSymbol(background, std::move(jumps));
}

/// {"type": "trig" | "chi" | "jump", ...}
inline Symbol symbol_from_json(const Json& j) {
  const std::string type = j.value("type", std::string("trig"));
  if (type == "trig") return trig_from_json(j);
  if (type == "chi") {
    // optional affine transport: scale * chi + shift
    const Complex scale = j.contains("scale") ? complex_from_json(j.at("scale")) : Complex{1.0, 0.0};
    JumpSymbol s = scale * chi_symbol();
    if (j.contains("background")) s = s + JumpSymbol(trig_from_json(j.at("background")), {});
    return s;
  }
  if (type == "jump") return jump_from_json(j);
  throw Error(ErrorCode::ParseError, "unknown symbol type '" + type + "'");
}

inline Json to_json(const Symbol& s) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SampledSymbol>) {
          Json values = Json::array();
          for (Eigen::Index k = 0; k < v.values.size(); ++k) values.push_back(to_json(v.values(k)));
          return Json{{"type", "sampled"}, {"values", values}};
        } else {
          return to_json(v);
        }
      },
      s);
}

/// Small trigonometric expressions for the command line: a sum of terms
/// "c", "c*z^k", "c*conj(z)^k", "z", "conj(z)" with complex c in a+bi form
/// written in parentheses when it has two parts, e.g. "z^2 + 0.5*conj(z) - 1".
inline TrigPolynomial parse_trig_expression(std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty symbol expression");
  std::map<int, Complex> coeffs;
  std::size_t pos = 0;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    }
    // term ends at the next top-level sign not inside parentheses or an exponent
    std::size_t end = pos;
    int depth = 0;
    for (; end < s.size(); ++end) {
      const char c = s[end];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && end > pos && (c == '+' || c == '-') && s[end - 1] != 'e' && s[end - 1] != 'E' &&
          s[end - 1] != '^') {
        break;
      }
    }
    std::string term = s.substr(pos, end - pos);
    pos = end;
    if (term.empty()) throw Error(ErrorCode::ParseError, "dangling sign in '" + std::string(text) + "'");
    Complex c{sign, 0.0};
    int power = 0;
    std::string var = term;
    const auto star = term.rfind('*');
    if (star != std::string::npos) {
      std::string cs = term.substr(0, star);
      if (cs.size() >= 2 && cs.front() == '(' && cs.back() == ')') cs = cs.substr(1, cs.size() - 2);
      c *= parse_complex(cs);
      var = term.substr(star + 1);
    } else if (term.find('z') == std::string::npos) {
      std::string cs = term;
      if (cs.size() >= 2 && cs.front() == '(' && cs.back() == ')') cs = cs.substr(1, cs.size() - 2);
      coeffs[0] += c * parse_complex(cs);
      continue;
    }
    int exponent = 1;
    const auto caret = var.find('^');
    std::string base = var;
    if (caret != std::string::npos) {
      base = var.substr(0, caret);
      exponent = static_cast<int>(detail::parse_real(var.substr(caret + 1), text));
    }
    if (base == "z") {
      power = exponent;
    } else if (base == "conj(z)" || base == "zbar") {
      power = -exponent;
    } else {
      throw Error(ErrorCode::ParseError, "unknown term '" + term + "' in '" + std::string(text) + "'");
    }
    coeffs[power] += c;
  }
  return TrigPolynomial(coeffs);
}

/// "chi", a trigonometric expression, or an inline JSON object.
inline Symbol parse_symbol_text(std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s == "chi") return chi_symbol();
  if (!s.empty() && s.front() == '{') {
    try {
      return symbol_from_json(Json::parse(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("bad symbol JSON: ") + e.what());
    }
  }
  return parse_trig_expression(s);
}

// ---------------------------------------------------------------------------
// Matrices and reports

inline Json to_json(const BasisTag& tag) {
  return Json{{"dimension", tag.dimension},
              {"fingerprint", tag.fingerprint},
              {"grid_size", tag.grid_size},
              {"kind", tag.grid_size == 0 ? "closed-form" : "quadrature"}};
}

inline Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const OperatorMatrix& m) {
  return Json{{"basis", to_json(m.basis)}, {"provenance", std::string(to_string(m.provenance))},
              {"entries", matrix_to_json(m.entries)}};
}

inline Json to_json(const VerificationReport& r) {
  Json j{{"identity", r.identity}, {"residual", r.residual}, {"tolerance", r.tolerance},
         {"pass", r.pass},         {"operands", r.operands}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

// ---------------------------------------------------------------------------
// Files

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial file.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace ttolab

#endif  // TTOLAB_IO_HPP
