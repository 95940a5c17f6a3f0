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

#ifndef SPARSENODE_DYNAMICS_H_
#define SPARSENODE_DYNAMICS_H_

#include <span>
#include <string>
#include <vector>

namespace sparsenode {

enum class ActivationKind { kTanh, kRelu, kLeakyRelu, kIdentity };

// Scalar activation applied componentwise. Every kind is globally Lipschitz
// with constant 1; relu, leaky_relu and identity are positively
// 1-homogeneous.
struct Activation {
  ActivationKind kind = ActivationKind::kTanh;
  double slope = 0.0;  // negative-side slope, leaky_relu only, in [0, 1)

  static Activation Tanh() { return {ActivationKind::kTanh, 0.0}; }
  static Activation Relu() { return {ActivationKind::kRelu, 0.0}; }
  static Activation LeakyRelu(double a);
  static Activation Identity() { return {ActivationKind::kIdentity, 0.0}; }

  bool positively_homogeneous() const { return kind != ActivationKind::kTanh; }
  double operator()(double s) const;
};

// Derivative of the activation. At the kink of relu / leaky_relu the
// left limit is used: relu'(0) = 0, leaky_relu'(0) = a.
double activation_deriv(const Activation& act, double s);

std::string to_string(ActivationKind kind);
ActivationKind activation_kind_from_string(const std::string& name);

enum class DynamicsForm {
  kInsideSigma,     // f_i = w sigma(x_i) + b
  kOutsideSigma,    // f_i = sigma(w x_i + b)
  kDriftlessAffine  // f = sum_j u_j (A_j x + c_j)
};

std::string to_string(DynamicsForm form);
DynamicsForm dynamics_form_from_string(const std::string& name);

// One vector field A x + c acting on the full stacked state.
struct AffineField {
  std::vector<double> A;  // row-major, state_dim x state_dim
  std::vector<double> c;  // state_dim
};

// Right-hand side of the stacked system. For the neural forms every sample
// block of size d shares the same control u = (w, b), flattened as the d*d
// row-major entries of w followed by the d entries of b.
class DynamicsSpec {
 public:
  // Throws InvalidInput on inconsistent dimensions, on a non-homogeneous
  // activation for the outside form, or on an empty field list for the
  // driftless form.
  DynamicsSpec(DynamicsForm form, int d, int n, Activation activation,
               std::vector<AffineField> fields = {});

  static DynamicsSpec Inside(int d, int n, Activation act) {
    return DynamicsSpec(DynamicsForm::kInsideSigma, d, n, act);
  }
  static DynamicsSpec Outside(int d, int n, Activation act) {
    return DynamicsSpec(DynamicsForm::kOutsideSigma, d, n, act);
  }
  static DynamicsSpec Driftless(int d, int n, std::vector<AffineField> fields) {
    return DynamicsSpec(DynamicsForm::kDriftlessAffine, d, n,
                        Activation::Identity(), std::move(fields));
  }

  DynamicsForm form() const { return form_; }
  int d() const { return d_; }
  int n() const { return n_; }
  const Activation& activation() const { return activation_; }
  const std::vector<AffineField>& fields() const { return fields_; }

  int state_dim() const { return d_ * n_; }
  int control_dim() const;

 private:
  DynamicsForm form_;
  int d_;
  int n_;
  Activation activation_;
  std::vector<AffineField> fields_;
};

// f(x, u) written into `out` (size state_dim).
void eval_field(const DynamicsSpec& spec, std::span<const double> x,
                std::span<const double> u, std::span<double> out);
std::vector<double> eval_field(const DynamicsSpec& spec,
                               std::span<const double> x,
                               std::span<const double> u);

// Vector-Jacobian product of f at (x, u): accumulates lambda^T df/dx into
// `gx` and lambda^T df/du into `gu`. Both outputs are added to, not
// overwritten.
void field_vjp(const DynamicsSpec& spec, std::span<const double> x,
               std::span<const double> u, std::span<const double> lambda,
               std::span<double> gx, std::span<double> gu);

// max_i |f(x, alpha u) - alpha f(x, u)|_i. Throws InvalidInput if
// alpha <= 0.
double check_homogeneity(const DynamicsSpec& spec, std::span<const double> x,
                         std::span<const double> u, double alpha);

// Smallest |pre-activation| encountered by f at (x, u): sigma's argument is
// x itself for the inside form and w x_i + b for the outside form. Returns
// +inf for the driftless form and for smooth activations.
double min_kink_distance(const DynamicsSpec& spec, std::span<const double> x,
                         std::span<const double> u);

}  // namespace sparsenode

#endif  // SPARSENODE_DYNAMICS_H_
