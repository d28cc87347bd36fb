#include "framekit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "framekit/error.hpp"

namespace framekit::io {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, origin + ": " + what);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(origin, e.what());
  }
}

std::size_t size_field(const Json& j, const char* key, const std::string& origin) {
  if (!j.contains(key)) fail(origin, std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_unsigned()) fail(origin, std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

cplx complex_entry(const Json& e, const std::string& origin, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    fail(origin, where + " must be [re, im]");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

bool looks_like_json(std::string_view text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && text[pos] == '{';
}

void write_json(std::string& out, const Json& j, int depth);

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

bool is_scalar_array(const Json& j) {
  for (const Json& e : j) {
    if (e.is_structured() && !(e.is_array() && e.size() == 2 && e[0].is_number())) return false;
  }
  return true;
}

void write_json(std::string& out, const Json& j, int depth) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        write_json(out, it.value(), depth + 1);
      }
      out += "\n";
      indent(out, depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      // Numbers and [re, im] pairs stay on one line.
      if (is_scalar_array(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(out, j[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        indent(out, depth + 1);
        write_json(out, j[i], depth + 1);
      }
      out += "\n";
      indent(out, depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "\"nan\"" : (v > 0 ? "\"inf\"" : "\"-inf\"");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Keep floats recognisable as floats when read back.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string dump(const Json& j) {
  std::string out;
  write_json(out, j, 0);
  out += "\n";
  return out;
}

DenseOperator parse_matrix_json(std::string_view text, const std::string& origin) {
  const Json j = parse(text, origin);
  if (!j.is_object()) fail(origin, "matrix file must be a JSON object");
  const std::size_t rows = size_field(j, "rows", origin);
  const std::size_t cols = size_field(j, "cols", origin);
  if (!j.contains("data") || !j.at("data").is_array()) fail(origin, "missing array field 'data'");
  const Json& data = j.at("data");
  if (data.size() != rows * cols) {
    fail(origin, "field 'data' has " + std::to_string(data.size()) + " entries, expected rows*cols = " +
                     std::to_string(rows * cols));
  }
  std::vector<cplx> entries;
  entries.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    entries.push_back(complex_entry(data[i], origin, "field 'data' entry " + std::to_string(i)));
  }
  try {
    return DenseOperator(rows, cols, std::move(entries));
  } catch (const Error& e) {
    fail(origin, e.what());
  }
}

DenseOperator parse_matrix_csv(std::string_view text, const std::string& origin) {
  std::vector<cplx> entries;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      std::string cell = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        fail(origin + ":" + std::to_string(line_no), "column " + std::to_string(n + 1) + " is not a number: '" + cell + "'");
      }
      entries.emplace_back(v, 0.0);
      ++n;
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (rows == 0) {
      cols = n;
    } else if (n != cols) {
      fail(origin + ":" + std::to_string(line_no),
           "row has " + std::to_string(n) + " values, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) fail(origin, "empty matrix");
  try {
    return DenseOperator(rows, cols, std::move(entries));
  } catch (const Error& e) {
    fail(origin, e.what());
  }
}

DenseOperator read_matrix(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  if (path.extension() == ".csv" || !looks_like_json(text)) return parse_matrix_csv(text, path.string());
  return parse_matrix_json(text, path.string());
}

FrameFamily parse_frame_json(std::string_view text, const std::string& origin) {
  const Json j = parse(text, origin);
  if (!j.is_object()) fail(origin, "frame file must be a JSON object");
  if (j.contains("rows")) return FrameFamily::from_synthesis(parse_matrix_json(text, origin));
  const std::size_t dim = size_field(j, "dim", origin);
  if (!j.contains("vectors") || !j.at("vectors").is_array()) fail(origin, "missing array field 'vectors'");
  std::vector<Vector> vectors;
  const Json& vs = j.at("vectors");
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const std::string where = "field 'vectors' entry " + std::to_string(k);
    if (!vs[k].is_array()) fail(origin, where + " must be an array");
    if (vs[k].size() != dim) {
      fail(origin, where + " has length " + std::to_string(vs[k].size()) + ", expected dim = " + std::to_string(dim));
    }
    Vector v;
    for (std::size_t i = 0; i < vs[k].size(); ++i) {
      v.push_back(complex_entry(vs[k][i], origin, where + " component " + std::to_string(i)));
    }
    vectors.push_back(std::move(v));
  }
  try {
    return FrameFamily(dim, std::move(vectors));
  } catch (const Error& e) {
    fail(origin, e.what());
  }
}

FrameFamily read_frame(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  if (path.extension() == ".csv" || !looks_like_json(text)) {
    return FrameFamily::from_synthesis(parse_matrix_csv(text, path.string()));
  }
  return parse_frame_json(text, path.string());
}

Vector read_vector(const std::filesystem::path& path) {
  const DenseOperator m = read_matrix(path);
  if (m.cols() != 1 && m.rows() != 1) fail(path.string(), "expected a single row or column");
  return Vector(m.entries().begin(), m.entries().end());
}

Json to_json(const DenseOperator& m) {
  Json data = Json::array();
  for (const cplx& z : m.entries()) data.push_back(Json::array({z.real(), z.imag()}));
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

Json to_json(std::span<const cplx> v) {
  Json a = Json::array();
  for (const cplx& z : v) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

Json to_json(const FrameFamily& f) {
  Json vs = Json::array();
  for (const Vector& v : f.vectors()) vs.push_back(to_json(std::span<const cplx>(v)));
  Json j;
  j["dim"] = f.dim();
  j["vectors"] = std::move(vs);
  return j;
}

}  // namespace framekit::io
