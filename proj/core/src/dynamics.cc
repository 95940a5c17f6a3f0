// Copyright 2026 The sparsenode Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparsenode/dynamics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsenode/error.h"

namespace sparsenode {
namespace {

void require_dims(const DynamicsSpec& spec, std::span<const double> x,
                  std::span<const double> u) {
  if (static_cast<int>(x.size()) != spec.state_dim()) {
    throw InvalidInput("state has " + std::to_string(x.size()) +
                       " entries, expected " +
                       std::to_string(spec.state_dim()));
  }
  if (static_cast<int>(u.size()) != spec.control_dim()) {
    throw InvalidInput("control has " + std::to_string(u.size()) +
                       " entries, expected " +
                       std::to_string(spec.control_dim()));
  }
}

}  // namespace

Activation Activation::LeakyRelu(double a) {
  if (!(a >= 0.0 && a < 1.0)) {
    throw InvalidInput("leaky_relu slope must lie in [0, 1)");
  }
  return {ActivationKind::kLeakyRelu, a};
}

double Activation::operator()(double s) const {
  switch (kind) {
    case ActivationKind::kTanh:
      return std::tanh(s);
    case ActivationKind::kRelu:
      return s > 0.0 ? s : 0.0;
    case ActivationKind::kLeakyRelu:
      return s > 0.0 ? s : slope * s;
    case ActivationKind::kIdentity:
      return s;
  }
  return s;
}

double activation_deriv(const Activation& act, double s) {
  switch (act.kind) {
    case ActivationKind::kTanh: {
      const double t = std::tanh(s);
      return 1.0 - t * t;
    }
    case ActivationKind::kRelu:
      return s > 0.0 ? 1.0 : 0.0;
    case ActivationKind::kLeakyRelu:
      return s > 0.0 ? 1.0 : act.slope;
    case ActivationKind::kIdentity:
      return 1.0;
  }
  return 1.0;
}

std::string to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kTanh:
      return "tanh";
    case ActivationKind::kRelu:
      return "relu";
    case ActivationKind::kLeakyRelu:
      return "leaky_relu";
    case ActivationKind::kIdentity:
      return "identity";
  }
  return "unknown";
}

ActivationKind activation_kind_from_string(const std::string& name) {
  if (name == "tanh") return ActivationKind::kTanh;
  if (name == "relu") return ActivationKind::kRelu;
  if (name == "leaky_relu") return ActivationKind::kLeakyRelu;
  if (name == "identity") return ActivationKind::kIdentity;
  throw InvalidInput("unknown activation '" + name + "'");
}

std::string to_string(DynamicsForm form) {
  switch (form) {
    case DynamicsForm::kInsideSigma:
      return "inside";
    case DynamicsForm::kOutsideSigma:
      return "outside";
    case DynamicsForm::kDriftlessAffine:
      return "driftless";
  }
  return "unknown";
}

DynamicsForm dynamics_form_from_string(const std::string& name) {
  if (name == "inside") return DynamicsForm::kInsideSigma;
  if (name == "outside") return DynamicsForm::kOutsideSigma;
  if (name == "driftless") return DynamicsForm::kDriftlessAffine;
  throw InvalidInput("unknown dynamics form '" + name + "'");
}

DynamicsSpec::DynamicsSpec(DynamicsForm form, int d, int n,
                           Activation activation,
                           std::vector<AffineField> fields)
    : form_(form), d_(d), n_(n), activation_(activation),
      fields_(std::move(fields)) {
  if (d_ < 1 || n_ < 1) {
    throw InvalidInput("dynamics needs d >= 1 and n >= 1");
  }
  if (activation_.kind == ActivationKind::kLeakyRelu &&
      !(activation_.slope >= 0.0 && activation_.slope < 1.0)) {
    throw InvalidInput("leaky_relu slope must lie in [0, 1)");
  }
  switch (form_) {
    case DynamicsForm::kInsideSigma:
      if (!fields_.empty()) {
        throw InvalidInput("affine fields are only used by the driftless form");
      }
      break;
    case DynamicsForm::kOutsideSigma:
      if (!fields_.empty()) {
        throw InvalidInput("affine fields are only used by the driftless form");
      }
      if (!activation_.positively_homogeneous()) {
        throw InvalidInput(
            "outside form requires a positively 1-homogeneous activation "
            "(relu, leaky_relu or identity), got " +
            to_string(activation_.kind));
      }
      break;
    case DynamicsForm::kDriftlessAffine: {
      if (fields_.empty()) {
        throw InvalidInput("driftless form needs at least one affine field");
      }
      const size_t dim = static_cast<size_t>(state_dim());
      for (size_t j = 0; j < fields_.size(); ++j) {
        if (fields_[j].A.size() != dim * dim || fields_[j].c.size() != dim) {
          throw InvalidInput("affine field " + std::to_string(j) +
                             " must have A of size " +
                             std::to_string(dim) + "x" + std::to_string(dim) +
                             " and c of size " + std::to_string(dim));
        }
      }
      break;
    }
  }
}

int DynamicsSpec::control_dim() const {
  if (form_ == DynamicsForm::kDriftlessAffine) {
    return static_cast<int>(fields_.size());
  }
  return d_ * d_ + d_;
}

void eval_field(const DynamicsSpec& spec, std::span<const double> x,
                std::span<const double> u, std::span<double> out) {
  require_dims(spec, x, u);
  if (out.size() != x.size()) {
    throw InvalidInput("output buffer does not match the state dimension");
  }
  const int d = spec.d();
  const Activation& act = spec.activation();
  switch (spec.form()) {
    case DynamicsForm::kInsideSigma: {
      const double* w = u.data();
      const double* b = u.data() + d * d;
      for (int i = 0; i < spec.n(); ++i) {
        const double* xi = x.data() + i * d;
        double* fi = out.data() + i * d;
        for (int r = 0; r < d; ++r) {
          double acc = b[r];
          for (int c = 0; c < d; ++c) acc += w[r * d + c] * act(xi[c]);
          fi[r] = acc;
        }
      }
      break;
    }
    case DynamicsForm::kOutsideSigma: {
      const double* w = u.data();
      const double* b = u.data() + d * d;
      for (int i = 0; i < spec.n(); ++i) {
        const double* xi = x.data() + i * d;
        double* fi = out.data() + i * d;
        for (int r = 0; r < d; ++r) {
          double acc = b[r];
          for (int c = 0; c < d; ++c) acc += w[r * d + c] * xi[c];
          fi[r] = act(acc);
        }
      }
      break;
    }
    case DynamicsForm::kDriftlessAffine: {
      const size_t dim = x.size();
      std::fill(out.begin(), out.end(), 0.0);
      for (size_t j = 0; j < spec.fields().size(); ++j) {
        const double uj = u[j];
        if (uj == 0.0) continue;
        const AffineField& field = spec.fields()[j];
        for (size_t r = 0; r < dim; ++r) {
          double acc = field.c[r];
          for (size_t c = 0; c < dim; ++c) acc += field.A[r * dim + c] * x[c];
          out[r] += uj * acc;
        }
      }
      break;
    }
  }
}

std::vector<double> eval_field(const DynamicsSpec& spec,
                               std::span<const double> x,
                               std::span<const double> u) {
  std::vector<double> out(x.size());
  eval_field(spec, x, u, out);
  return out;
}

void field_vjp(const DynamicsSpec& spec, std::span<const double> x,
               std::span<const double> u, std::span<const double> lambda,
               std::span<double> gx, std::span<double> gu) {
  require_dims(spec, x, u);
  if (lambda.size() != x.size() || gx.size() != x.size() ||
      gu.size() != u.size()) {
    throw InvalidInput("vjp buffers do not match the dynamics dimensions");
  }
  const int d = spec.d();
  const Activation& act = spec.activation();
  switch (spec.form()) {
    case DynamicsForm::kInsideSigma: {
      const double* w = u.data();
      double* gw = gu.data();
      double* gb = gu.data() + d * d;
      for (int i = 0; i < spec.n(); ++i) {
        const double* xi = x.data() + i * d;
        const double* li = lambda.data() + i * d;
        double* gxi = gx.data() + i * d;
        for (int c = 0; c < d; ++c) {
          const double s = act(xi[c]);
          double wt_l = 0.0;
          for (int r = 0; r < d; ++r) {
            wt_l += w[r * d + c] * li[r];
            gw[r * d + c] += li[r] * s;
          }
          gxi[c] += activation_deriv(act, xi[c]) * wt_l;
        }
        for (int r = 0; r < d; ++r) gb[r] += li[r];
      }
      break;
    }
    case DynamicsForm::kOutsideSigma: {
      const double* w = u.data();
      const double* b = u.data() + d * d;
      double* gw = gu.data();
      double* gb = gu.data() + d * d;
      std::vector<double> delta(d);
      for (int i = 0; i < spec.n(); ++i) {
        const double* xi = x.data() + i * d;
        const double* li = lambda.data() + i * d;
        double* gxi = gx.data() + i * d;
        for (int r = 0; r < d; ++r) {
          double z = b[r];
          for (int c = 0; c < d; ++c) z += w[r * d + c] * xi[c];
          delta[r] = activation_deriv(act, z) * li[r];
          gb[r] += delta[r];
        }
        for (int r = 0; r < d; ++r) {
          for (int c = 0; c < d; ++c) {
            gw[r * d + c] += delta[r] * xi[c];
            gxi[c] += w[r * d + c] * delta[r];
          }
        }
      }
      break;
    }
    case DynamicsForm::kDriftlessAffine: {
      const size_t dim = x.size();
      for (size_t j = 0; j < spec.fields().size(); ++j) {
        const AffineField& field = spec.fields()[j];
        const double uj = u[j];
        double dot = 0.0;
        for (size_t r = 0; r < dim; ++r) {
          double fr = field.c[r];
          for (size_t c = 0; c < dim; ++c) {
            fr += field.A[r * dim + c] * x[c];
            gx[c] += uj * field.A[r * dim + c] * lambda[r];
          }
          dot += lambda[r] * fr;
        }
        gu[j] += dot;
      }
      break;
    }
  }
}

double check_homogeneity(const DynamicsSpec& spec, std::span<const double> x,
                         std::span<const double> u, double alpha) {
  if (!(alpha > 0.0)) {
    throw InvalidInput("homogeneity check needs alpha > 0");
  }
  std::vector<double> scaled(u.begin(), u.end());
  for (double& v : scaled) v *= alpha;
  const std::vector<double> lhs = eval_field(spec, x, scaled);
  const std::vector<double> rhs = eval_field(spec, x, u);
  double dev = 0.0;
  for (size_t i = 0; i < lhs.size(); ++i) {
    dev = std::max(dev, std::abs(lhs[i] - alpha * rhs[i]));
  }
  return dev;
}

double min_kink_distance(const DynamicsSpec& spec, std::span<const double> x,
                         std::span<const double> u) {
  require_dims(spec, x, u);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const ActivationKind kind = spec.activation().kind;
  if (kind != ActivationKind::kRelu && kind != ActivationKind::kLeakyRelu) {
    return kInf;
  }
  const int d = spec.d();
  double best = kInf;
  switch (spec.form()) {
    case DynamicsForm::kInsideSigma:
      for (double xi : x) best = std::min(best, std::abs(xi));
      break;
    case DynamicsForm::kOutsideSigma:
      for (int i = 0; i < spec.n(); ++i) {
        const double* xi = x.data() + i * d;
        for (int r = 0; r < d; ++r) {
          double z = u[d * d + r];
          for (int c = 0; c < d; ++c) z += u[r * d + c] * xi[c];
          best = std::min(best, std::abs(z));
        }
      }
      break;
    case DynamicsForm::kDriftlessAffine:
      break;
  }
  return best;
}

}  // namespace sparsenode
