#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "framekit/frame.hpp"

namespace framekit::io {

using Json = nlohmann::ordered_json;

/// Matrix from JSON {"rows", "cols", "data": [[re, im], ...]} (row-major) or
/// from a real CSV file (one matrix row per line). Errors name the file and,
/// for CSV, the line. Throws InvalidArgument.
DenseOperator read_matrix(const std::filesystem::path& path);
DenseOperator parse_matrix_json(std::string_view text, const std::string& origin);
DenseOperator parse_matrix_csv(std::string_view text, const std::string& origin);

/// Frame from JSON {"dim", "vectors": [[[re, im], ...], ...]}. A matrix file
/// is accepted as well and read as a synthesis matrix.
FrameFamily read_frame(const std::filesystem::path& path);
FrameFamily parse_frame_json(std::string_view text, const std::string& origin);

/// Column or row matrix read as a vector.
Vector read_vector(const std::filesystem::path& path);

Json to_json(const DenseOperator& m);
Json to_json(const FrameFamily& f);
/// [[re, im], ...]
Json to_json(std::span<const cplx> v);
/// Finite values as numbers; infinities and NaN as the strings "inf",
/// "-inf", "nan".
Json number(double v);

/// Deterministic serialisation with shortest round-trip doubles.
std::string dump(const Json& j);

/// Shortest round-trip text for a double.
std::string format_double(double v);

}  // namespace framekit::io
