// deplda/model-io.h

// Copyright 2026  The deplda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DEPLDA_MODEL_IO_H_
#define DEPLDA_MODEL_IO_H_

// Versioned text model format:
//
//   deplda-model <version>
//   kind <global|local|lda>
//   dim <d>
//   <block-name> <count> <v1> ... <vcount>
//   ...
//
// Values use the shortest round-trip decimal form, so load(save(m)) == m
// bit for bit.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "deplda/local-model.h"
#include "deplda/plda.h"
#include "deplda/preprocess.h"

namespace deplda {

inline constexpr const char *kModelFormatVersion = "1";

/// Generic container behind the typed loaders.  Block order is preserved.
class ModelFile {
 public:
  ModelFile() = default;
  ModelFile(std::string kind, int dim) : kind_(std::move(kind)), dim_(dim) {}

  const std::string &Kind() const { return kind_; }
  int Dim() const { return dim_; }

  void Put(const std::string &name, std::vector<double> values);
  void Put(const std::string &name, const Vector &values);
  void Put(const std::string &name, const Matrix &values);  // row-major
  bool Has(const std::string &name) const;
  /// Length of a block; throws DataError if it is missing.
  std::size_t Size(const std::string &name) const;
  /// Throws DataError if the block is missing or its length differs.
  const std::vector<double> &Get(const std::string &name,
                                 std::size_t expected_size) const;
  Vector GetVector(const std::string &name, std::size_t expected_size) const;
  Matrix GetMatrix(const std::string &name, int rows, int cols) const;
  double GetScalar(const std::string &name) const;

  void Write(std::ostream &os) const;
  static ModelFile Read(std::istream &is, const std::string &source);

 private:
  std::string kind_;
  int dim_ = 0;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<double>> blocks_;
  std::string source_;
};

/// A global model plus the front end it was trained behind.
struct GlobalModelBundle {
  GlobalModel model;
  FrontEnd frontend;
};

void SaveModel(const GlobalModel &model, const FrontEnd &frontend,
               std::ostream &os);
void SaveModel(const GlobalModel &model, const FrontEnd &frontend,
               const std::string &path);
void SaveModel(const GlobalModel &model, std::ostream &os);
void SaveModel(const LocalModel &model, std::ostream &os);
void SaveModel(const LocalModel &model, const std::string &path);
void SaveModel(const LdaTransform &lda, std::ostream &os);

GlobalModelBundle LoadGlobalModel(std::istream &is, const std::string &source);
GlobalModelBundle LoadGlobalModel(const std::string &path);
LocalModel LoadLocalModel(std::istream &is, const std::string &source);
LocalModel LoadLocalModel(const std::string &path);
LdaTransform LoadLdaTransform(std::istream &is, const std::string &source);

}  // namespace deplda

#endif  // DEPLDA_MODEL_IO_H_
