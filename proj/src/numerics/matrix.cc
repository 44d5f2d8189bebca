// czsda/numerics/matrix.cc

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

#include "czsda/numerics/matrix.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "czsda/base/error.h"

namespace czsda {
namespace numerics {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw ShapeError("negative dimension " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

void Matrix::Fill(double value) {
  std::fill(data_.begin(), data_.end(), value);
}

bool Matrix::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void CheckSameShape(const Matrix &a, const Matrix &b, const std::string &what) {
  if (!a.SameShape(b)) {
    throw ShapeError(what + ": " + std::to_string(a.Rows()) + "x" +
                     std::to_string(a.Cols()) + " vs " +
                     std::to_string(b.Rows()) + "x" + std::to_string(b.Cols()));
  }
}

void CheckFinite(const Matrix &m, const std::string &what) {
  if (!m.AllFinite()) {
    throw TrainingError("non-finite values in " + what);
  }
}

Matrix MatMul(const Matrix &a, const Matrix &b) {
  if (a.Cols() != b.Rows()) {
    throw ShapeError("matmul " + std::to_string(a.Rows()) + "x" +
                     std::to_string(a.Cols()) + " * " +
                     std::to_string(b.Rows()) + "x" + std::to_string(b.Cols()));
  }
  Matrix out(a.Rows(), b.Cols());
  const int m = a.Rows(), k = a.Cols(), n = b.Cols();
  for (int i = 0; i < m; ++i) {
    double *out_row = out.RowData(i);
    const double *a_row = a.RowData(i);
    for (int p = 0; p < k; ++p) {
      const double av = a_row[p];
      if (av == 0.0) continue;
      const double *b_row = b.RowData(p);
      for (int j = 0; j < n; ++j) out_row[j] += av * b_row[j];
    }
  }
  return out;
}

Matrix MatMulTransB(const Matrix &a, const Matrix &b) {
  if (a.Cols() != b.Cols()) {
    throw ShapeError("matmul-transb " + std::to_string(a.Rows()) + "x" +
                     std::to_string(a.Cols()) + " * (" +
                     std::to_string(b.Rows()) + "x" + std::to_string(b.Cols()) +
                     ")^T");
  }
  Matrix out(a.Rows(), b.Rows());
  const int m = a.Rows(), k = a.Cols(), n = b.Rows();
  for (int i = 0; i < m; ++i) {
    const double *a_row = a.RowData(i);
    double *out_row = out.RowData(i);
    for (int j = 0; j < n; ++j) {
      const double *b_row = b.RowData(j);
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += a_row[p] * b_row[p];
      out_row[j] = acc;
    }
  }
  return out;
}

Matrix MatTransMul(const Matrix &a, const Matrix &b) {
  if (a.Rows() != b.Rows()) {
    throw ShapeError("mattrans-mul (" + std::to_string(a.Rows()) + "x" +
                     std::to_string(a.Cols()) + ")^T * " +
                     std::to_string(b.Rows()) + "x" + std::to_string(b.Cols()));
  }
  Matrix out(a.Cols(), b.Cols());
  const int k = a.Rows(), m = a.Cols(), n = b.Cols();
  for (int p = 0; p < k; ++p) {
    const double *a_row = a.RowData(p);
    const double *b_row = b.RowData(p);
    for (int i = 0; i < m; ++i) {
      const double av = a_row[i];
      if (av == 0.0) continue;
      double *out_row = out.RowData(i);
      for (int j = 0; j < n; ++j) out_row[j] += av * b_row[j];
    }
  }
  return out;
}

Matrix Transpose(const Matrix &a) {
  Matrix out(a.Cols(), a.Rows());
  for (int i = 0; i < a.Rows(); ++i) {
    for (int j = 0; j < a.Cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

void AddInPlace(Matrix *a, const Matrix &b) {
  CheckSameShape(*a, b, "add");
  double *pa = a->Data();
  const double *pb = b.Data();
  for (std::size_t i = 0; i < a->Size(); ++i) pa[i] += pb[i];
}

void AxpyInPlace(Matrix *a, double s, const Matrix &b) {
  CheckSameShape(*a, b, "axpy");
  double *pa = a->Data();
  const double *pb = b.Data();
  for (std::size_t i = 0; i < a->Size(); ++i) pa[i] += s * pb[i];
}

void ScaleInPlace(Matrix *a, double s) {
  for (double &v : a->Flat()) v *= s;
}

Matrix ColSums(const Matrix &a) {
  Matrix out(a.Cols(), 1);
  for (int i = 0; i < a.Rows(); ++i) {
    const double *row = a.RowData(i);
    for (int j = 0; j < a.Cols(); ++j) out(j, 0) += row[j];
  }
  return out;
}

double Dot(const Matrix &a, const Matrix &b) {
  CheckSameShape(a, b, "dot");
  double acc = 0.0;
  const double *pa = a.Data();
  const double *pb = b.Data();
  for (std::size_t i = 0; i < a.Size(); ++i) acc += pa[i] * pb[i];
  return acc;
}

double MaxAbs(const Matrix &a) {
  double m = 0.0;
  for (double v : a.Flat()) m = std::max(m, std::fabs(v));
  return m;
}

double LogAdd(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double LogSumExp(std::span<const double> values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

Matrix Softmax(const Matrix &v) {
  if (v.Cols() != 1) {
    throw ShapeError("softmax expects a column vector, got " +
                     std::to_string(v.Rows()) + "x" + std::to_string(v.Cols()));
  }
  Matrix out(v.Rows(), 1);
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.Rows(); ++i) hi = std::max(hi, v(i, 0));
  double denom = 0.0;
  for (int i = 0; i < v.Rows(); ++i) {
    out(i, 0) = std::exp(v(i, 0) - hi);
    denom += out(i, 0);
  }
  for (int i = 0; i < v.Rows(); ++i) out(i, 0) /= denom;
  return out;
}

Matrix LogSoftmaxRows(const Matrix &logits) {
  Matrix out(logits.Rows(), logits.Cols());
  for (int t = 0; t < logits.Rows(); ++t) {
    const double *in = logits.RowData(t);
    double *o = out.RowData(t);
    double hi = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < logits.Cols(); ++j) hi = std::max(hi, in[j]);
    double acc = 0.0;
    for (int j = 0; j < logits.Cols(); ++j) acc += std::exp(in[j] - hi);
    const double lz = hi + std::log(acc);
    for (int j = 0; j < logits.Cols(); ++j) o[j] = in[j] - lz;
  }
  return out;
}

void SoftmaxRowsInPlace(Matrix *logits) {
  for (int t = 0; t < logits->Rows(); ++t) {
    double *row = logits->RowData(t);
    double hi = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < logits->Cols(); ++j) hi = std::max(hi, row[j]);
    double acc = 0.0;
    for (int j = 0; j < logits->Cols(); ++j) {
      row[j] = std::exp(row[j] - hi);
      acc += row[j];
    }
    for (int j = 0; j < logits->Cols(); ++j) row[j] /= acc;
  }
}

}  // namespace numerics
}  // namespace czsda
