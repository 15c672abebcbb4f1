#pragma once
#include <vector>

#include "rpcone/jordan.hpp"
#include "rpcone/rng.hpp"

namespace rpcone::testing {

inline AlgebraElement random_element(const ConeSpec& spec, SplitMix64& rng, double scale = 1.0) {
  Eigen::VectorXd v(spec.dim());
  for (int i = 0; i < v.size(); ++i) v(i) = scale * rng.normal();
  return AlgebraElement(spec, v);
}

inline std::vector<ConeSpec> sample_specs() {
  return {ConeSpec::orthant(5),
          ConeSpec::lorentz(4),
          ConeSpec::psd(4),
          ConeSpec({{BlockKind::kOrthant, 2}, {BlockKind::kLorentz, 3}, {BlockKind::kPsd, 3}}),
          ConeSpec({{BlockKind::kPsd, 2}, {BlockKind::kPsd, 3}, {BlockKind::kLorentz, 2}})};
}

}  // namespace rpcone::testing
