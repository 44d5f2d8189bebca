// czsda/numerics/matrix.h

// Copyright 2026  czsda authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CZSDA_NUMERICS_MATRIX_H_
#define CZSDA_NUMERICS_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace czsda {
namespace numerics {

// Dense row-major matrix of 64-bit floats. Column vectors are matrices
// with cols == 1. Everything in the repository trains in double precision
// so finite-difference checks stay meaningful.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-initialized

  int Rows() const { return rows_; }
  int Cols() const { return cols_; }
  std::size_t Size() const { return data_.size(); }

  double &operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  double *Data() { return data_.data(); }
  const double *Data() const { return data_.data(); }
  double *RowData(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const double *RowData(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

  std::span<double> Flat() { return {data_.data(), data_.size()}; }
  std::span<const double> Flat() const { return {data_.data(), data_.size()}; }

  void Fill(double value);
  bool SameShape(const Matrix &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool AllFinite() const;

  bool operator==(const Matrix &other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Throws ShapeError mentioning |what| unless the shapes agree.
void CheckSameShape(const Matrix &a, const Matrix &b, const std::string &what);
// Throws TrainingError mentioning |what| if any entry is not finite.
void CheckFinite(const Matrix &m, const std::string &what);

Matrix MatMul(const Matrix &a, const Matrix &b);        // a(m×k) · b(k×n)
Matrix MatMulTransB(const Matrix &a, const Matrix &b);  // a(m×k) · bᵀ, b(n×k)
Matrix MatTransMul(const Matrix &a, const Matrix &b);   // aᵀ · b, a(k×m), b(k×n)
Matrix Transpose(const Matrix &a);

void AddInPlace(Matrix *a, const Matrix &b);
// a ← a + s·b
void AxpyInPlace(Matrix *a, double s, const Matrix &b);
void ScaleInPlace(Matrix *a, double s);
Matrix ColSums(const Matrix &a);  // returns cols×1 vector of column sums
double Dot(const Matrix &a, const Matrix &b);
double MaxAbs(const Matrix &a);

// log(exp(a) + exp(b)) with max-subtraction; tolerates -inf operands.
double LogAdd(double a, double b);
double LogSumExp(std::span<const double> values);

// Softmax of a column vector; output sums to 1 within 1e-12 and is
// invariant to adding a constant to all inputs.
Matrix Softmax(const Matrix &v);
// Row-wise log-softmax of a T×V matrix (per-frame normalization).
Matrix LogSoftmaxRows(const Matrix &logits);
void SoftmaxRowsInPlace(Matrix *logits);

}  // namespace numerics
}  // namespace czsda

#endif  // CZSDA_NUMERICS_MATRIX_H_
