#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sim/core.hpp"
#include "sim/eval.hpp"
#include "sim/pipeline.hpp"

namespace sim::io {

/// Malformed or unreadable input file.
class FormatError : public Error {
public:
    using Error::Error;
};

// Matrix file: "SIMM", u16 version (1), u32 rows, u32 cols, then rows*cols
// float32 values row-major. All little-endian.
inline constexpr std::uint16_t kMatrixVersion = 1;
inline constexpr std::size_t kMatrixHeaderSize = 14;

std::string encode_matrix(const Matrix<float>& m);
Matrix<float> decode_matrix(std::string_view bytes);

Matrix<float> to_float(const Matrix<double>& m);
Matrix<double> to_double(const Matrix<float>& m);

void write_matrix_file(const std::filesystem::path& path, const Matrix<float>& m);
Matrix<float> read_matrix_file(const std::filesystem::path& path);

/// Decimal CSV: first line "<rows>,<cols>", then one line per row.
Matrix<double> parse_csv_matrix(std::istream& in);

/// Binary matrix, or CSV when the extension is ".csv".
Matrix<double> read_matrix(const std::filesystem::path& path);

/// One registry line as read, before person labels become integers.
struct RawSample {
    std::size_t index = 0;
    std::string person;
    Modality modality = Modality::RGB;
    std::optional<std::int32_t> camera;
};

/// Lines "index,person,modality,camera"; camera may be empty.
std::vector<RawSample> parse_registry(std::istream& in);
std::vector<RawSample> read_registry_file(const std::filesystem::path& path);

/// Converts the person labels of both sets with one shared mapping: labels
/// are used as integers when every label is an integer, otherwise distinct
/// strings are numbered in lexicographic order.
std::pair<Registry, Registry> resolve_person_labels(const std::vector<RawSample>& queries,
                                                    const std::vector<RawSample>& gallery);

std::string format_registry(const Registry& reg);

/// Locale-independent decimal with 6 fixed fractional digits.
std::string format_fixed(double v);

/// One line per query: query index, then gallery indices best first.
std::string format_rankings(const Registry& queries, const Registry& gallery,
                            const Rankings& rankings);

/// mAP, CMC at ranks 1/5/10/20, trials, seed.
std::string format_report(const EvalReport& report);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace sim::io
