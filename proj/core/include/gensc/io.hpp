#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gensc/data.hpp"

namespace gensc::io {

enum class MatrixFormat { kCsv, kBin };

std::optional<MatrixFormat> parse_format(std::string_view text);
std::string_view to_string(MatrixFormat format);

// SCLG binary layout: "SCLG", u16 version (=1), u32 rows, u32 cols, then
// rows * cols little-endian IEEE-754 f32 values in row-major order.
inline constexpr std::string_view kBinMagic = "SCLG";
inline constexpr std::uint16_t kBinVersion = 1;
inline constexpr std::size_t kBinHeaderSize = 14;

std::string encode_bin(const Matrix& m);
Matrix decode_bin(std::string_view bytes);

// CSV: one header row, then comma-separated decimal floats.
std::string encode_csv(const Matrix& m, const std::vector<std::string>& header = {});
Matrix decode_csv(std::string_view text);

Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format);
void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format,
                  const std::vector<std::string>& header = {});

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct FileRef {
  std::filesystem::path path;  // relative paths resolve against the manifest
  MatrixFormat format = MatrixFormat::kCsv;
};

struct SplitEntry {
  std::string name;
  ShiftTag shift_tag = ShiftTag::kInD;
  FileRef logits;
  std::optional<FileRef> labels;  // optional only for ShiftLabel splits
  std::optional<FileRef> features;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::size_t num_classes = 0;
  std::optional<std::size_t> feature_dim;
  std::vector<SplitEntry> splits;
  std::optional<FileRef> weight_norms;
  std::optional<FileRef> weights;
  std::optional<FileRef> bias;

  std::filesystem::path resolve(const FileRef& ref) const;
};

Manifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const Manifest& manifest);

// Which shift groups enter an evaluation: in, in+cov, in+label, all.
enum class SplitSelection { kIn, kInCov, kInLabel, kAll };
std::optional<SplitSelection> parse_split_selection(std::string_view text);
std::string_view to_string(SplitSelection selection);
bool includes(SplitSelection selection, ShiftTag tag);

struct Dataset {
  EvalSet set;
  std::optional<ClassifierHead> head;
  std::vector<std::string> split_of_row;
};

// Reads every file the manifest references and checks all declared shapes
// before assembling the selected splits. Throws kShapeMismatch, kFormat, kIo
// or kValidation.
Dataset load_dataset(const Manifest& manifest, SplitSelection selection);

}  // namespace gensc::io
