#include "gensc/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gensc/errors.hpp"
#include "json.hpp"

namespace gensc::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<MatrixFormat> parse_format(std::string_view text) {
  if (text == "csv") return MatrixFormat::kCsv;
  if (text == "bin") return MatrixFormat::kBin;
  return std::nullopt;
}

std::string_view to_string(MatrixFormat format) {
  return format == MatrixFormat::kCsv ? "csv" : "bin";
}

namespace {

void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::string_view in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)])) << (8 * i);
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string encode_bin(const Matrix& m) {
  if (m.rows() > 0xFFFFFFFFLL || m.cols() > 0xFFFFFFFFLL)
    throw Error(ErrorCode::kInvalidArgument, "matrix too large for the SCLG format");
  std::string out;
  out.reserve(kBinHeaderSize + static_cast<std::size_t>(m.size()) * 4);
  out.append(kBinMagic);
  put_le(out, kBinVersion, 2);
  put_le(out, static_cast<std::uint64_t>(m.rows()), 4);
  put_le(out, static_cast<std::uint64_t>(m.cols()), 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto f = static_cast<float>(m.data()[i]);
    put_le(out, std::bit_cast<std::uint32_t>(f), 4);
  }
  return out;
}

Matrix decode_bin(std::string_view bytes) {
  if (bytes.size() < kBinHeaderSize) {
    throw Error(ErrorCode::kFormat, "truncated header at byte " + std::to_string(bytes.size()) +
                                        " (need " + std::to_string(kBinHeaderSize) + ")");
  }
  if (bytes.substr(0, 4) != kBinMagic) throw Error(ErrorCode::kFormat, "bad magic at byte 0");
  const auto version = get_le(bytes, 4, 2);
  if (version != kBinVersion)
    throw Error(ErrorCode::kFormat, "unsupported version " + std::to_string(version) + " at byte 4");
  const auto rows = get_le(bytes, 6, 4);
  const auto cols = get_le(bytes, 10, 4);
  const auto expected = kBinHeaderSize + rows * cols * 4;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::kFormat, "payload ends at byte " + std::to_string(bytes.size()) + ", expected " +
                                        std::to_string(expected) + " for " + std::to_string(rows) + "x" +
                                        std::to_string(cols));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto raw = static_cast<std::uint32_t>(get_le(bytes, kBinHeaderSize + 4 * static_cast<std::size_t>(i), 4));
    m.data()[i] = static_cast<double>(std::bit_cast<float>(raw));
  }
  return m;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string encode_csv(const Matrix& m, const std::vector<std::string>& header) {
  std::string out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) out.push_back(',');
    out += header.size() == static_cast<std::size_t>(m.cols()) ? header[static_cast<std::size_t>(j)]
                                                                : "c" + std::to_string(j);
  }
  out.push_back('\n');
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

Matrix decode_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (!have_header) {
      cols = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != cols) {
      throw Error(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                                          " fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto f = fields[j];
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size() || f.empty()) {
        throw Error(ErrorCode::kFormat, "line " + std::to_string(line_no) + ", field " + std::to_string(j + 1) +
                                            ": not a number '" + std::string(f) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (!have_header) throw Error(ErrorCode::kFormat, "line 1: missing header row");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

Matrix read_matrix(const fs::path& path, MatrixFormat format) {
  const auto bytes = read_file(path);
  try {
    return format == MatrixFormat::kBin ? decode_bin(bytes) : decode_csv(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_matrix(const fs::path& path, const Matrix& m, MatrixFormat format,
                  const std::vector<std::string>& header) {
  write_file_atomic(path, format == MatrixFormat::kBin ? encode_bin(m) : encode_csv(m, header));
}

fs::path Manifest::resolve(const FileRef& ref) const {
  return ref.path.is_absolute() ? ref.path : base_dir / ref.path;
}

namespace {

FileRef parse_ref(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("path") || !j["path"].is_string())
    throw Error(ErrorCode::kFormat, where + ": expected an object with a string 'path'");
  FileRef ref;
  ref.path = j["path"].get<std::string>();
  const std::string fmt = j.value("format", ref.path.extension() == ".bin" ? "bin" : "csv");
  const auto parsed = parse_format(fmt);
  if (!parsed) throw Error(ErrorCode::kFormat, where + ": unknown format '" + fmt + "'");
  ref.format = *parsed;
  return ref;
}

json ref_to_json(const FileRef& ref) {
  return json{{"path", ref.path.generic_string()}, {"format", std::string(to_string(ref.format))}};
}

void require_exists(const Manifest& m, const FileRef& ref) {
  const auto p = m.resolve(ref);
  if (!fs::exists(p)) throw Error(ErrorCode::kIo, "manifest references missing file " + p.string());
}

}  // namespace

Manifest parse_manifest(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, std::string("manifest: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kFormat, "manifest: top level must be an object");
  Manifest m;
  m.base_dir = base_dir;
  try {
    m.num_classes = doc.at("num_classes").get<std::size_t>();
    if (doc.contains("feature_dim")) m.feature_dim = doc["feature_dim"].get<std::size_t>();
    const auto& splits = doc.at("splits");
    if (!splits.is_array() || splits.empty()) throw Error(ErrorCode::kFormat, "manifest: 'splits' must be a non-empty array");
    for (std::size_t i = 0; i < splits.size(); ++i) {
      const auto& s = splits[i];
      const std::string where = "manifest split " + std::to_string(i);
      SplitEntry e;
      e.name = s.value("name", "split" + std::to_string(i));
      const std::string tag = s.value("shift_tag", "InD");
      const auto parsed = parse_shift_tag(tag);
      if (!parsed) throw Error(ErrorCode::kFormat, where + ": unknown shift_tag '" + tag + "'");
      e.shift_tag = *parsed;
      e.logits = parse_ref(s.at("logits"), where + " logits");
      if (s.contains("labels")) e.labels = parse_ref(s["labels"], where + " labels");
      if (s.contains("features")) e.features = parse_ref(s["features"], where + " features");
      if (!e.labels && e.shift_tag != ShiftTag::kShiftLabel)
        throw Error(ErrorCode::kFormat, where + ": labels are required unless shift_tag is ShiftLabel");
      m.splits.push_back(std::move(e));
    }
    if (doc.contains("head")) {
      const auto& h = doc["head"];
      if (h.contains("weight_norms")) m.weight_norms = parse_ref(h["weight_norms"], "manifest head weight_norms");
      if (h.contains("weights")) m.weights = parse_ref(h["weights"], "manifest head weights");
      if (h.contains("bias")) m.bias = parse_ref(h["bias"], "manifest head bias");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("manifest: ") + e.what());
  }
  if (m.num_classes < 2) throw Error(ErrorCode::kFormat, "manifest: num_classes must be >= 2");
  return m;
}

Manifest load_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kIo, "manifest not found: " + path.string());
  auto m = parse_manifest(read_file(path), path.parent_path());
  for (const auto& s : m.splits) {
    require_exists(m, s.logits);
    if (s.labels) require_exists(m, *s.labels);
    if (s.features) require_exists(m, *s.features);
  }
  for (const auto* ref : {&m.weight_norms, &m.weights, &m.bias})
    if (*ref) require_exists(m, **ref);
  return m;
}

std::string manifest_to_json(const Manifest& manifest) {
  json doc;
  doc["num_classes"] = manifest.num_classes;
  if (manifest.feature_dim) doc["feature_dim"] = *manifest.feature_dim;
  doc["splits"] = json::array();
  for (const auto& s : manifest.splits) {
    json e{{"name", s.name}, {"shift_tag", std::string(to_string(s.shift_tag))}, {"logits", ref_to_json(s.logits)}};
    if (s.labels) e["labels"] = ref_to_json(*s.labels);
    if (s.features) e["features"] = ref_to_json(*s.features);
    doc["splits"].push_back(std::move(e));
  }
  if (manifest.weight_norms || manifest.weights || manifest.bias) {
    json h = json::object();
    if (manifest.weight_norms) h["weight_norms"] = ref_to_json(*manifest.weight_norms);
    if (manifest.weights) h["weights"] = ref_to_json(*manifest.weights);
    if (manifest.bias) h["bias"] = ref_to_json(*manifest.bias);
    doc["head"] = std::move(h);
  }
  return doc.dump(2) + "\n";
}

std::optional<SplitSelection> parse_split_selection(std::string_view text) {
  if (text == "in") return SplitSelection::kIn;
  if (text == "in+cov") return SplitSelection::kInCov;
  if (text == "in+label") return SplitSelection::kInLabel;
  if (text == "all") return SplitSelection::kAll;
  return std::nullopt;
}

std::string_view to_string(SplitSelection selection) {
  switch (selection) {
    case SplitSelection::kIn: return "in";
    case SplitSelection::kInCov: return "in+cov";
    case SplitSelection::kInLabel: return "in+label";
    case SplitSelection::kAll: return "all";
  }
  return "?";
}

bool includes(SplitSelection selection, ShiftTag tag) {
  switch (tag) {
    case ShiftTag::kInD: return true;
    case ShiftTag::kShiftCov: return selection == SplitSelection::kInCov || selection == SplitSelection::kAll;
    case ShiftTag::kShiftLabel: return selection == SplitSelection::kInLabel || selection == SplitSelection::kAll;
  }
  return false;
}

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void expect_cols(const Matrix& m, std::size_t cols, const std::string& what) {
  if (static_cast<std::size_t>(m.cols()) != cols) {
    throw Error(ErrorCode::kShapeMismatch, what + " has shape " + shape(m) + ", expected " +
                                               std::to_string(cols) + " columns");
  }
}

Vector as_vector(const Matrix& m, std::size_t length, const std::string& what) {
  const bool column = m.cols() == 1 && static_cast<std::size_t>(m.rows()) == length;
  const bool row = m.rows() == 1 && static_cast<std::size_t>(m.cols()) == length;
  if (!column && !row) {
    throw Error(ErrorCode::kShapeMismatch, what + " has shape " + shape(m) + ", expected " +
                                               std::to_string(length) + " values");
  }
  return Eigen::Map<const Vector>(m.data(), static_cast<Eigen::Index>(length));
}

std::vector<int> as_labels(const Matrix& m, std::size_t rows, const std::string& what) {
  const Vector v = as_vector(m, rows, what);
  std::vector<int> labels(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double x = v[static_cast<Eigen::Index>(i)];
    if (x != std::round(x) || std::abs(x) > 1e9)
      throw Error(ErrorCode::kFormat, what + ": row " + std::to_string(i) + " is not an integer label");
    labels[i] = static_cast<int>(x);
  }
  return labels;
}

}  // namespace

Dataset load_dataset(const Manifest& manifest, SplitSelection selection) {
  const std::size_t k = manifest.num_classes;
  struct Loaded {
    const SplitEntry* entry;
    EvalSet set;
  };
  std::vector<Loaded> loaded;
  // Read and shape-check everything first; nothing is computed on a
  // partially valid manifest.
  for (const auto& s : manifest.splits) {
    const std::string what = "split '" + s.name + "'";
    Loaded l{&s, {}};
    l.set.logits = read_matrix(manifest.resolve(s.logits), s.logits.format);
    expect_cols(l.set.logits, k, what + " logits");
    const auto n = static_cast<std::size_t>(l.set.logits.rows());
    if (s.labels) {
      l.set.labels = as_labels(read_matrix(manifest.resolve(*s.labels), s.labels->format), n, what + " labels");
    } else {
      l.set.labels.assign(n, kShiftedLabel);
    }
    if (s.features) {
      auto f = read_matrix(manifest.resolve(*s.features), s.features->format);
      if (static_cast<std::size_t>(f.rows()) != n)
        throw Error(ErrorCode::kShapeMismatch, what + " features have " + std::to_string(f.rows()) +
                                                   " rows, logits have " + std::to_string(n));
      if (manifest.feature_dim) expect_cols(f, *manifest.feature_dim, what + " features");
      l.set.features = std::move(f);
    }
    l.set.tags.assign(n, s.shift_tag);
    loaded.push_back(std::move(l));
  }

  Dataset out;
  if (manifest.weight_norms || manifest.weights) {
    ClassifierHead head = [&] {
      if (!manifest.weights) return ClassifierHead{};
      Matrix w = read_matrix(manifest.resolve(*manifest.weights), manifest.weights->format);
      expect_cols(w, k, "head weights");
      if (manifest.feature_dim && static_cast<std::size_t>(w.rows()) != *manifest.feature_dim)
        throw Error(ErrorCode::kShapeMismatch, "head weights have " + std::to_string(w.rows()) +
                                                   " rows, expected feature_dim");
      return ClassifierHead::from_weights(std::move(w));
    }();
    if (manifest.weight_norms) {
      head.weight_norms = as_vector(read_matrix(manifest.resolve(*manifest.weight_norms), manifest.weight_norms->format),
                                    k, "head weight_norms");
    }
    if (manifest.bias) {
      head.bias = as_vector(read_matrix(manifest.resolve(*manifest.bias), manifest.bias->format), k, "head bias");
    }
    out.head = std::move(head);
  }

  std::vector<EvalSet> parts;
  for (auto& l : loaded) {
    if (!includes(selection, l.entry->shift_tag)) continue;
    out.split_of_row.insert(out.split_of_row.end(), l.set.rows(), l.entry->name);
    parts.push_back(std::move(l.set));
  }
  if (parts.empty()) {
    throw Error(ErrorCode::kValidation, "no split in the manifest matches selection '" +
                                            std::string(to_string(selection)) + "'");
  }
  out.set = concat(parts);
  require_valid(out.set, out.head ? &*out.head : nullptr);
  return out;
}

}  // namespace gensc::io
