// Copyright 2026 The noisefp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "noisefp/error.hpp"
#include "noisefp/svm.hpp"

namespace noisefp::svm {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_body(std::ostream& out, const SvmModel& model) {
  out << "kernel " << to_string(model.kernel.kind) << '\n';
  out << "gamma " << num(model.kernel.gamma) << '\n';
  out << "coef0 " << num(model.kernel.coef0) << '\n';
  out << "c " << num(model.c) << '\n';
  out << "classes " << model.classes[0] << ' ' << model.classes[1] << '\n';
  out << "bias " << num(model.bias) << '\n';
  out << "converged " << (model.converged ? 1 : 0) << '\n';
  out << "iterations " << model.iterations << '\n';
  const std::size_t p = model.support_vectors.empty() ? 0 : model.support_vectors.front().size();
  out << "support_vectors " << model.support_vectors.size() << ' ' << p << '\n';
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    out << num(model.dual_coefs[i]) << ' ' << model.support_indices[i];
    for (double x : model.support_vectors[i]) out << ' ' << num(x);
    out << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::istringstream line(std::string_view key) {
    std::string text;
    if (!std::getline(in_, text)) fail("unexpected end of input, expected '" + std::string(key) + "'");
    ++line_no_;
    std::istringstream ss(text);
    std::string word;
    ss >> word;
    if (word != key) fail("expected '" + std::string(key) + "', got '" + word + "'");
    return ss;
  }

  std::istringstream raw() {
    std::string text;
    if (!std::getline(in_, text)) fail("unexpected end of input");
    ++line_no_;
    return std::istringstream(text);
  }

  template <typename T>
  T get(std::istringstream& ss) {
    T v{};
    if (!(ss >> v)) fail("malformed value");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(fmt::format("model line {}: {}", line_no_, what));
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

double parse_double(Reader& r, std::istringstream& ss) {
  std::string token = r.get<std::string>(ss);
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) r.fail("malformed number '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    r.fail("malformed number '" + token + "'");
  }
}

SvmModel read_body(Reader& r) {
  SvmModel model;
  {
    auto ss = r.line("kernel");
    try {
      model.kernel.kind = parse_kernel_kind(r.get<std::string>(ss));
    } catch (const ValidationError& e) {
      r.fail(e.what());
    }
  }
  {
    auto ss = r.line("gamma");
    model.kernel.gamma = parse_double(r, ss);
  }
  {
    auto ss = r.line("coef0");
    model.kernel.coef0 = parse_double(r, ss);
  }
  {
    auto ss = r.line("c");
    model.c = parse_double(r, ss);
  }
  {
    auto ss = r.line("classes");
    model.classes[0] = r.get<int>(ss);
    model.classes[1] = r.get<int>(ss);
  }
  {
    auto ss = r.line("bias");
    model.bias = parse_double(r, ss);
  }
  {
    auto ss = r.line("converged");
    model.converged = r.get<int>(ss) != 0;
  }
  {
    auto ss = r.line("iterations");
    model.iterations = r.get<std::int64_t>(ss);
  }
  auto ss = r.line("support_vectors");
  const auto count = r.get<std::size_t>(ss);
  const auto p = r.get<std::size_t>(ss);
  for (std::size_t i = 0; i < count; ++i) {
    auto row = r.raw();
    model.dual_coefs.push_back(parse_double(r, row));
    model.support_indices.push_back(r.get<std::size_t>(row));
    FeatureVector x(p);
    for (auto& e : x) e = parse_double(r, row);
    model.support_vectors.push_back(std::move(x));
  }
  model.kernel.validate();
  return model;
}

}  // namespace

void write_model(std::ostream& out, const SvmModel& model) {
  out << "noisefp-svm 1\n";
  write_body(out, model);
}

SvmModel read_model(std::istream& in) {
  Reader r(in);
  auto ss = r.line("noisefp-svm");
  if (r.get<int>(ss) != 1) r.fail("unsupported model version");
  return read_body(r);
}

void write_model(std::ostream& out, const OvrModel& model) {
  out << "noisefp-ovr 1\n";
  out << "classes " << model.classes.size();
  for (int c : model.classes) out << ' ' << c;
  out << '\n';
  for (const auto& m : model.models) write_body(out, m);
}

OvrModel read_ovr_model(std::istream& in) {
  Reader r(in);
  auto header = r.line("noisefp-ovr");
  if (r.get<int>(header) != 1) r.fail("unsupported model version");
  auto ss = r.line("classes");
  const auto count = r.get<std::size_t>(ss);
  OvrModel model;
  for (std::size_t i = 0; i < count; ++i) model.classes.push_back(r.get<int>(ss));
  for (std::size_t i = 0; i < count; ++i) model.models.push_back(read_body(r));
  return model;
}

}  // namespace noisefp::svm
