#include "ocpdmd/snapshots.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "ocpdmd/errors.hpp"
#include "ocpdmd/kernels.hpp"

namespace ocpdmd {
namespace {

constexpr char kMagic[4] = {'S', 'N', 'P', '1'};
constexpr std::size_t kFixedHeader = 4 + 8 + 8 + 8 + 8 + 2;

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFFu));
  out.push_back(static_cast<char>((v >> 8) & 0xFFu));
}

void PutF64(std::string& out, double v) { PutU64(out, std::bit_cast<std::uint64_t>(v)); }

class ByteReader {
 public:
  explicit ByteReader(const std::string& bytes) : bytes_(bytes) {}

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }

  void Require(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw FormatError(std::string("SNP1: truncated ") + what,
                        FormatError::Location::kByteOffset, offset_);
    }
  }

  std::uint64_t U64(const char* what) {
    Require(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[offset_ + i])) << (8 * i);
    }
    offset_ += 8;
    return v;
  }

  std::uint16_t U16(const char* what) {
    Require(2, what);
    const auto lo = static_cast<unsigned char>(bytes_[offset_]);
    const auto hi = static_cast<unsigned char>(bytes_[offset_ + 1]);
    offset_ += 2;
    return static_cast<std::uint16_t>(lo | (hi << 8));
  }

  double F64(const char* what) { return std::bit_cast<double>(U64(what)); }

  std::string Bytes(std::size_t n, const char* what) {
    Require(n, what);
    std::string out = bytes_.substr(offset_, n);
    offset_ += n;
    return out;
  }

 private:
  const std::string& bytes_;
  std::size_t offset_ = 0;
};

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileAtomically(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InvalidArgument("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

void AppendDouble(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, end);
}

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

double ParseDouble(const std::string& field, std::size_t line_no) {
  std::size_t begin = 0;
  std::size_t end = field.size();
  while (begin < end && (field[begin] == ' ' || field[begin] == '\t')) ++begin;
  while (end > begin && (field[end - 1] == ' ' || field[end - 1] == '\t' || field[end - 1] == '\r')) {
    --end;
  }
  double v = 0.0;
  const char* first = field.data() + begin;
  if (begin < end && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, field.data() + end, v);
  if (ec != std::errc() || ptr != field.data() + end || begin == end) {
    throw FormatError("CSV: cannot parse number '" + field + "'", FormatError::Location::kLine,
                      line_no);
  }
  if (!std::isfinite(v)) {
    throw FormatError("CSV: non-finite value", FormatError::Location::kLine, line_no);
  }
  return v;
}

}  // namespace

SnapshotMatrix::SnapshotMatrix(Eigen::MatrixXd values, double dt, double t0, std::string label)
    : values_(std::move(values)), dt_(dt), t0_(t0), label_(std::move(label)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InvalidArgument("snapshot matrix must have at least one row and one column");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw InvalidArgument("snapshot dt must be positive");
  if (!std::isfinite(t0_)) throw InvalidArgument("snapshot t0 must be finite");
  if (!values_.allFinite()) throw InvalidArgument("snapshot values must be finite");
}

SnapshotMatrix SnapshotMatrix::columns(Eigen::Index first, Eigen::Index count) const {
  if (first < 0 || count < 1 || first + count > n_time()) {
    throw InvalidArgument("column range [" + std::to_string(first) + ", " +
                          std::to_string(first + count) + ") outside " +
                          std::to_string(n_time()) + " columns");
  }
  return SnapshotMatrix(values_.middleCols(first, count), dt_, time(first), label_);
}

SnapshotMatrix SnapshotMatrix::with_label(std::string label) const {
  return SnapshotMatrix(values_, dt_, t0_, std::move(label));
}

ShiftPair shift_pair(const SnapshotMatrix& s) {
  if (s.n_time() < 2) {
    throw InvalidArgument("shift_pair needs at least 2 columns, got " +
                          std::to_string(s.n_time()));
  }
  const Eigen::Index n = s.n_time() - 1;
  const double* data = s.values().data();
  return ShiftPair{ShiftPair::View(data, s.n_dof(), n),
                   ShiftPair::View(data + s.n_dof(), s.n_dof(), n), s.dt(), s.t0()};
}

std::pair<SnapshotMatrix, SnapshotMatrix> split_train_test(const SnapshotMatrix& s,
                                                           Eigen::Index n_train,
                                                           Eigen::Index n_test) {
  if (n_train < 2) throw InvalidArgument("n_train must be at least 2");
  if (n_test < 1) throw InvalidArgument("n_test must be at least 1");
  if (n_train + n_test > s.n_time()) {
    throw InvalidArgument("n_train + n_test = " + std::to_string(n_train + n_test) +
                          " exceeds " + std::to_string(s.n_time()) + " columns");
  }
  return {s.columns(0, n_train), s.columns(n_train, n_test)};
}

std::pair<SnapshotMatrix, NormalizationRecord> demean(const SnapshotMatrix& s) {
  NormalizationRecord record{kernels::parallel::row_means(s.values()), true};
  Eigen::MatrixXd centered = s.values().colwise() - record.mean;
  return {SnapshotMatrix(std::move(centered), s.dt(), s.t0(), s.label()), std::move(record)};
}

SnapshotMatrix remean(const SnapshotMatrix& s, const NormalizationRecord& record) {
  if (!record.applied) return s;
  if (record.mean.size() != s.n_dof()) throw InvalidArgument("remean: mean length mismatch");
  Eigen::MatrixXd restored = s.values().colwise() + record.mean;
  return SnapshotMatrix(std::move(restored), s.dt(), s.t0(), s.label());
}

std::string encode_binary(const SnapshotMatrix& s) {
  if (s.label().size() > 0xFFFFu) throw InvalidArgument("label longer than 65535 bytes");
  std::string out;
  out.reserve(kFixedHeader + s.label().size() +
              8 * static_cast<std::size_t>(s.n_dof() * s.n_time()));
  out.append(kMagic, 4);
  PutU64(out, static_cast<std::uint64_t>(s.n_dof()));
  PutU64(out, static_cast<std::uint64_t>(s.n_time()));
  PutF64(out, s.dt());
  PutF64(out, s.t0());
  PutU16(out, static_cast<std::uint16_t>(s.label().size()));
  out.append(s.label());
  const double* data = s.values().data();
  const auto count = static_cast<std::size_t>(s.n_dof() * s.n_time());
  for (std::size_t i = 0; i < count; ++i) PutF64(out, data[i]);
  return out;
}

SnapshotMatrix decode_binary(const std::string& bytes) {
  ByteReader reader(bytes);
  if (reader.Bytes(4, "magic") != std::string(kMagic, 4)) {
    throw FormatError("SNP1: bad magic", FormatError::Location::kByteOffset, 0);
  }
  const std::size_t dims_at = reader.offset();
  const std::uint64_t n_dof = reader.U64("n_dof");
  const std::uint64_t n_time = reader.U64("n_time");
  if (n_dof == 0 || n_time == 0 || n_dof > (1ull << 32) || n_time > (1ull << 32)) {
    throw FormatError("SNP1: invalid dimensions", FormatError::Location::kByteOffset, dims_at);
  }
  const std::size_t dt_at = reader.offset();
  const double dt = reader.F64("dt");
  const double t0 = reader.F64("t0");
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0)) {
    throw FormatError("SNP1: invalid time metadata", FormatError::Location::kByteOffset, dt_at);
  }
  const std::uint16_t label_len = reader.U16("label length");
  std::string label = reader.Bytes(label_len, "label");
  const std::uint64_t count = n_dof * n_time;
  if (reader.remaining() != 8 * count) {
    throw FormatError("SNP1: payload holds " + std::to_string(reader.remaining()) +
                          " bytes, expected " + std::to_string(8 * count),
                      FormatError::Location::kByteOffset, reader.offset());
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n_dof), static_cast<Eigen::Index>(n_time));
  double* data = values.data();
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t at = reader.offset();
    data[i] = reader.F64("values");
    if (!std::isfinite(data[i])) {
      throw FormatError("SNP1: non-finite value", FormatError::Location::kByteOffset, at);
    }
  }
  return SnapshotMatrix(std::move(values), dt, t0, std::move(label));
}

void save_binary(const SnapshotMatrix& s, const std::filesystem::path& path) {
  WriteFileAtomically(path, encode_binary(s));
}

SnapshotMatrix load_binary(const std::filesystem::path& path) {
  return decode_binary(ReadFile(path));
}

void save_csv(const SnapshotMatrix& s, const std::filesystem::path& path) {
  std::string out = "t";
  for (Eigen::Index i = 0; i < s.n_dof(); ++i) out += ",dof" + std::to_string(i);
  out += '\n';
  for (Eigen::Index k = 0; k < s.n_time(); ++k) {
    AppendDouble(out, s.time(k));
    for (Eigen::Index i = 0; i < s.n_dof(); ++i) {
      out += ',';
      AppendDouble(out, s.values()(i, k));
    }
    out += '\n';
  }
  WriteFileAtomically(path, out);
}

SnapshotMatrix load_csv(const std::filesystem::path& path, std::string label) {
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FormatError("CSV: empty file", FormatError::Location::kLine, 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitCommas(line);
  if (header.size() < 2 || header[0] != "t") {
    throw FormatError("CSV: header must be t,dof0,...", FormatError::Location::kLine, 1);
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "dof" + std::to_string(i - 1)) {
      throw FormatError("CSV: unexpected header column '" + header[i] + "'",
                        FormatError::Location::kLine, 1);
    }
  }
  const std::size_t n_dof = header.size() - 1;
  std::vector<double> times;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCommas(line);
    if (fields.size() != n_dof + 1) {
      throw FormatError("CSV: expected " + std::to_string(n_dof + 1) + " fields, got " +
                            std::to_string(fields.size()),
                        FormatError::Location::kLine, line_no);
    }
    times.push_back(ParseDouble(fields[0], line_no));
    for (std::size_t i = 1; i < fields.size(); ++i) flat.push_back(ParseDouble(fields[i], line_no));
  }
  if (times.size() < 2) {
    throw FormatError("CSV: need at least two time rows to infer dt", FormatError::Location::kLine,
                      line_no);
  }
  // Steps are checked against the first one so the error names the row that
  // breaks the grid; the stored dt is the average, which rounds better.
  const double first = times[1] - times[0];
  if (!(first > 0.0)) throw FormatError("CSV: time column must increase", FormatError::Location::kLine, 3);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (std::abs(step - first) > 1e-9 * std::max(1.0, first)) {
      throw FormatError("CSV: non-uniform time grid", FormatError::Location::kLine, k + 2);
    }
  }
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  Eigen::MatrixXd values = Eigen::Map<const Eigen::MatrixXd>(
      flat.data(), static_cast<Eigen::Index>(n_dof), static_cast<Eigen::Index>(times.size()));
  return SnapshotMatrix(std::move(values), dt, times.front(), std::move(label));
}

void save(const SnapshotMatrix& s, const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    save_csv(s, path);
  } else {
    save_binary(s, path);
  }
}

SnapshotMatrix load(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_csv(path, path.stem().string());
  return load_binary(path);
}

}  // namespace ocpdmd
