// core/src/model-io.cc

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

#include "deplda/model-io.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace deplda {

namespace {

const char *kMagic = "deplda-model";

std::vector<std::string> Tokens(const std::string &line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

std::vector<double> ToStd(const Vector &v) { return {v.data(), v.data() + v.size()}; }

int ToCount(double v, const std::string &what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e9)
    throw DataError(what + " must be a non-negative integer");
  return static_cast<int>(v);
}

}  // namespace

void ModelFile::Put(const std::string &name, std::vector<double> values) {
  if (!blocks_.count(name)) order_.push_back(name);
  blocks_[name] = std::move(values);
}

void ModelFile::Put(const std::string &name, const Vector &values) {
  Put(name, ToStd(values));
}

void ModelFile::Put(const std::string &name, const Matrix &values) {
  std::vector<double> flat;
  flat.reserve(values.size());
  for (Eigen::Index r = 0; r < values.rows(); r++)
    for (Eigen::Index c = 0; c < values.cols(); c++) flat.push_back(values(r, c));
  Put(name, std::move(flat));
}

bool ModelFile::Has(const std::string &name) const { return blocks_.count(name) > 0; }

std::size_t ModelFile::Size(const std::string &name) const {
  auto it = blocks_.find(name);
  if (it == blocks_.end()) throw DataError(source_ + ": missing block '" + name + "'");
  return it->second.size();
}

const std::vector<double> &ModelFile::Get(const std::string &name,
                                          std::size_t expected_size) const {
  auto it = blocks_.find(name);
  if (it == blocks_.end())
    throw DataError(source_ + ": missing block '" + name + "'");
  if (it->second.size() != expected_size)
    throw DataError(source_ + ": block '" + name + "' has " +
                    std::to_string(it->second.size()) + " values, expected " +
                    std::to_string(expected_size));
  return it->second;
}

Vector ModelFile::GetVector(const std::string &name, std::size_t expected_size) const {
  const auto &v = Get(name, expected_size);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix ModelFile::GetMatrix(const std::string &name, int rows, int cols) const {
  const auto &v = Get(name, static_cast<std::size_t>(rows) * cols);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; r++)
    for (int c = 0; c < cols; c++) m(r, c) = v[static_cast<std::size_t>(r) * cols + c];
  return m;
}

double ModelFile::GetScalar(const std::string &name) const { return Get(name, 1)[0]; }

void ModelFile::Write(std::ostream &os) const {
  os << kMagic << ' ' << kModelFormatVersion << '\n'
     << "kind " << kind_ << '\n'
     << "dim " << dim_ << '\n';
  for (const auto &name : order_) {
    const auto &values = blocks_.at(name);
    os << name << ' ' << values.size();
    for (double v : values) os << ' ' << FormatDouble(v);
    os << '\n';
  }
}

ModelFile ModelFile::Read(std::istream &is, const std::string &source) {
  ModelFile file;
  file.source_ = source;
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::vector<std::string> {
    while (std::getline(is, line)) {
      line_no++;
      auto toks = Tokens(line);
      if (!toks.empty()) return toks;
    }
    return {};
  };
  auto where = [&]() { return source + ":" + std::to_string(line_no) + ": "; };

  auto header = next();
  if (header.size() != 2 || header[0] != kMagic)
    throw DataError(where() + "not a deplda model file");
  if (header[1] != kModelFormatVersion)
    throw DataError(where() + "unsupported model format version '" + header[1] +
                    "' (expected " + kModelFormatVersion + ")");
  auto kind = next();
  if (kind.size() != 2 || kind[0] != "kind") throw DataError(where() + "expected 'kind <name>'");
  file.kind_ = kind[1];
  auto dim = next();
  if (dim.size() != 2 || dim[0] != "dim") throw DataError(where() + "expected 'dim <d>'");
  auto d = ParseDouble(dim[1]);
  if (!d || *d < 1 || *d != std::floor(*d) || *d > 1e7)
    throw DataError(where() + "invalid dimension '" + dim[1] + "'");
  file.dim_ = static_cast<int>(*d);

  for (auto toks = next(); !toks.empty(); toks = next()) {
    if (toks.size() < 2) throw DataError(where() + "expected '<block> <count> <values...>'");
    auto count = ParseDouble(toks[1]);
    if (!count || *count < 0 || *count != std::floor(*count))
      throw DataError(where() + "invalid count for block '" + toks[0] + "'");
    if (toks.size() - 2 != static_cast<std::size_t>(*count))
      throw DataError(where() + "block '" + toks[0] + "' declares " + toks[1] +
                      " values but has " + std::to_string(toks.size() - 2));
    if (file.blocks_.count(toks[0]))
      throw DataError(where() + "duplicate block '" + toks[0] + "'");
    std::vector<double> values;
    values.reserve(toks.size() - 2);
    for (std::size_t i = 2; i < toks.size(); i++) {
      auto v = ParseDouble(toks[i]);
      if (!v || !std::isfinite(*v))
        throw DataError(where() + "invalid number '" + toks[i] + "' in block '" +
                        toks[0] + "'");
      values.push_back(*v);
    }
    file.Put(toks[0], std::move(values));
  }
  return file;
}

namespace {

void RequireKind(const ModelFile &file, const std::string &kind, const std::string &source) {
  if (file.Kind() != kind)
    throw DataError(source + ": expected a '" + kind + "' model, found '" + file.Kind() + "'");
}

template <typename Fn>
void WriteFile(const std::string &path, Fn &&fn) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path + " for writing");
  fn(os);
  os.flush();
  if (!os) throw DataError("write failed on " + path);
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path + " for reading");
  return is;
}

}  // namespace

void SaveModel(const GlobalModel &model, const FrontEnd &frontend, std::ostream &os) {
  ModelFile file("global", model.Dim());
  file.Put("mean", model.mean);
  file.Put("W", model.transform);
  file.Put("epsilon", model.epsilon);
  if (frontend.mean.size() > 0 || frontend.lda) {
    file.Put("frontend_mean", frontend.lda ? frontend.lda->mean : frontend.mean);
    if (frontend.lda) file.Put("lda_projection", frontend.lda->projection);
  }
  file.Put("length_norm", std::vector<double>{frontend.length_norm ? 1.0 : 0.0});
  file.Write(os);
}

void SaveModel(const GlobalModel &model, const FrontEnd &frontend,
               const std::string &path) {
  WriteFile(path, [&](std::ostream &os) { SaveModel(model, frontend, os); });
}

void SaveModel(const GlobalModel &model, std::ostream &os) {
  SaveModel(model, FrontEnd{}, os);
}

void SaveModel(const LocalModel &model, std::ostream &os) {
  ModelFile file("local", model.Dim());
  file.Put("m_diag", model.m_diag);
  file.Put("best_epoch", std::vector<double>{static_cast<double>(model.best_epoch)});
  file.Put("monitor_eer_at_best", std::vector<double>{model.monitor_eer_at_best});
  std::vector<double> epoch, objective, eer;
  for (const auto &e : model.history.epochs) {
    epoch.push_back(e.epoch);
    objective.push_back(e.objective);
    eer.push_back(e.monitor_eer);
  }
  file.Put("history_epoch", std::move(epoch));
  file.Put("history_objective", std::move(objective));
  file.Put("history_eer", std::move(eer));
  file.Write(os);
}

void SaveModel(const LocalModel &model, const std::string &path) {
  WriteFile(path, [&](std::ostream &os) { SaveModel(model, os); });
}

void SaveModel(const LdaTransform &lda, std::ostream &os) {
  ModelFile file("lda", lda.OutputDim());
  file.Put("input_dim", std::vector<double>{static_cast<double>(lda.InputDim())});
  file.Put("mean", lda.mean);
  file.Put("projection", lda.projection);
  file.Write(os);
}

GlobalModelBundle LoadGlobalModel(std::istream &is, const std::string &source) {
  const ModelFile file = ModelFile::Read(is, source);
  RequireKind(file, "global", source);
  const int d = file.Dim();
  GlobalModelBundle out;
  out.model.mean = file.GetVector("mean", d);
  out.model.transform = file.GetMatrix("W", d, d);
  out.model.epsilon = file.GetVector("epsilon", d);
  if ((out.model.epsilon.array() <= 0.0).any())
    throw DataError(source + ": epsilon entries must be positive");
  if (file.Has("frontend_mean")) {
    const std::size_t input_dim = file.Size("frontend_mean");
    if (input_dim == 0) throw DataError(source + ": empty frontend_mean block");
    const Vector fm = file.GetVector("frontend_mean", input_dim);
    if (file.Has("lda_projection")) {
      LdaTransform lda;
      lda.mean = fm;
      lda.projection = file.GetMatrix("lda_projection", d, static_cast<int>(input_dim));
      out.frontend.lda = std::move(lda);
    } else if (static_cast<int>(input_dim) != d) {
      throw DataError(source + ": frontend_mean has " + std::to_string(input_dim) +
                      " values but the model dimension is " + std::to_string(d));
    }
    out.frontend.mean = fm;
  } else if (file.Has("lda_projection")) {
    throw DataError(source + ": lda_projection without frontend_mean");
  }
  if (file.Has("length_norm"))
    out.frontend.length_norm = file.GetScalar("length_norm") != 0.0;
  return out;
}

GlobalModelBundle LoadGlobalModel(const std::string &path) {
  auto is = OpenInput(path);
  return LoadGlobalModel(is, path);
}

LocalModel LoadLocalModel(std::istream &is, const std::string &source) {
  const ModelFile file = ModelFile::Read(is, source);
  RequireKind(file, "local", source);
  LocalModel out;
  out.m_diag = file.GetVector("m_diag", file.Dim());
  out.best_epoch = ToCount(file.GetScalar("best_epoch"), source + ": best_epoch");
  out.monitor_eer_at_best = file.GetScalar("monitor_eer_at_best");
  if (file.Has("history_epoch")) {
    const std::size_t n = file.Size("history_epoch");
    const auto &epoch = file.Get("history_epoch", n);
    const auto &objective = file.Get("history_objective", n);
    const auto &eer = file.Get("history_eer", n);
    for (std::size_t i = 0; i < n; i++)
      out.history.epochs.push_back(
          {ToCount(epoch[i], source + ": history_epoch"), objective[i], eer[i]});
  }
  return out;
}

LocalModel LoadLocalModel(const std::string &path) {
  auto is = OpenInput(path);
  return LoadLocalModel(is, path);
}

LdaTransform LoadLdaTransform(std::istream &is, const std::string &source) {
  const ModelFile file = ModelFile::Read(is, source);
  RequireKind(file, "lda", source);
  const int input_dim = ToCount(file.GetScalar("input_dim"), source + ": input_dim");
  if (input_dim < file.Dim())
    throw DataError(source + ": LDA output dimension exceeds input dimension");
  LdaTransform lda;
  lda.mean = file.GetVector("mean", input_dim);
  lda.projection = file.GetMatrix("projection", file.Dim(), input_dim);
  return lda;
}

}  // namespace deplda
