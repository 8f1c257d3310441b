#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ocpdmd {

/// A field trajectory sampled on a uniform time grid: column k holds the field
/// at t0 + k*dt. Immutable once constructed.
class SnapshotMatrix {
 public:
  /// Throws InvalidArgument on empty data, non-finite entries or dt <= 0.
  SnapshotMatrix(Eigen::MatrixXd values, double dt, double t0 = 0.0, std::string label = {});

  Eigen::Index n_dof() const { return values_.rows(); }
  Eigen::Index n_time() const { return values_.cols(); }
  double dt() const { return dt_; }
  double t0() const { return t0_; }
  double time(Eigen::Index k) const { return t0_ + static_cast<double>(k) * dt_; }
  const std::string& label() const { return label_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd column(Eigen::Index k) const { return values_.col(k); }

  /// Contiguous column range [first, first + count) with t0 shifted to match.
  SnapshotMatrix columns(Eigen::Index first, Eigen::Index count) const;
  SnapshotMatrix with_label(std::string label) const;

 private:
  Eigen::MatrixXd values_;
  double dt_;
  double t0_;
  std::string label_;
};

/// Non-owning views of the two time-shifted halves of a snapshot matrix.
/// Valid only while the parent matrix is alive.
struct ShiftPair {
  using View = Eigen::Map<const Eigen::MatrixXd>;

  View x;        // columns 0 .. n_time-2
  View x_prime;  // columns 1 .. n_time-1
  double dt;
  double t0;

  Eigen::Index n_dof() const { return x.rows(); }
  Eigen::Index n_transitions() const { return x.cols(); }
};

/// Per-row mean removed from a field before fitting.
struct NormalizationRecord {
  Eigen::VectorXd mean;
  bool applied = false;
};

/// Throws InvalidArgument when s has fewer than two columns.
ShiftPair shift_pair(const SnapshotMatrix& s);

/// Chronological prefix of n_train columns, then the next n_test columns.
std::pair<SnapshotMatrix, SnapshotMatrix> split_train_test(const SnapshotMatrix& s,
                                                           Eigen::Index n_train,
                                                           Eigen::Index n_test);

std::pair<SnapshotMatrix, NormalizationRecord> demean(const SnapshotMatrix& s);

/// Adds a recorded mean back to every column; identity if the record is unapplied.
SnapshotMatrix remean(const SnapshotMatrix& s, const NormalizationRecord& record);

// SNP1 binary layout (all little-endian):
//   "SNP1" | u64 n_dof | u64 n_time | f64 dt | f64 t0 | u16 L | label[L] | f64 values (col-major)
void save_binary(const SnapshotMatrix& s, const std::filesystem::path& path);
SnapshotMatrix load_binary(const std::filesystem::path& path);

/// Serialized SNP1 bytes, used by save_binary and by digesting code.
std::string encode_binary(const SnapshotMatrix& s);
SnapshotMatrix decode_binary(const std::string& bytes);

// CSV layout: header `t,dof0,...,dofN`, then one row per time instance.
void save_csv(const SnapshotMatrix& s, const std::filesystem::path& path);
SnapshotMatrix load_csv(const std::filesystem::path& path, std::string label = {});

/// Dispatches on the extension: ".csv" is CSV, everything else SNP1.
void save(const SnapshotMatrix& s, const std::filesystem::path& path);
SnapshotMatrix load(const std::filesystem::path& path);

}  // namespace ocpdmd
