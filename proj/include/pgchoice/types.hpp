#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>

#include "pgchoice/error.hpp"

namespace pgchoice {

enum class ModelType { Probit, Logit, Mnl, Binomial };

inline std::string_view to_string(ModelType t) {
  switch (t) {
    case ModelType::Probit: return "probit";
    case ModelType::Logit: return "logit";
    case ModelType::Mnl: return "mnl";
    case ModelType::Binomial: return "binomial";
  }
  return "?";
}

inline ModelType parse_model_type(std::string_view s) {
  if (s == "probit") return ModelType::Probit;
  if (s == "logit") return ModelType::Logit;
  if (s == "mnl") return ModelType::Mnl;
  if (s == "binomial") return ModelType::Binomial;
  throw InvalidParameter("unknown model type '" + std::string(s) + "'");
}

// Numeric model input as the samplers see it.
//   binary:   y in {0, 1}
//   binomial: y = successes, trials = N_i
//   mnl:      y in {0, ..., categories - 1}, category 0 is the baseline
struct ModelData {
  Eigen::MatrixXd X;
  Eigen::VectorXi y;
  Eigen::VectorXi trials;
  int categories = 2;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
};

// Number of coefficient vectors estimated: one per non-baseline category for
// MNL, one otherwise.
inline int coefficient_blocks(ModelType t, const ModelData& data) {
  return t == ModelType::Mnl ? data.categories - 1 : 1;
}

}  // namespace pgchoice
