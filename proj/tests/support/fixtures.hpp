#pragma once

#include <string>

#include "dilemma/model_io.hpp"

#ifndef DILEMMA_FIXTURE_DIR
#error "DILEMMA_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace testing_support {

inline std::string fixture_path(const std::string& name) {
  return std::string(DILEMMA_FIXTURE_DIR) + "/" + name + ".json";
}

inline std::string fixture_text(const std::string& name) {
  return dilemma::read_file(fixture_path(name));
}

/// `prefix` is one of driving, blocked_paths, two_evils.
inline dilemma::ModelBundle fixture_bundle(const std::string& prefix) {
  return dilemma::load_bundle(fixture_path(prefix + "_tasks"),
                              fixture_path(prefix + "_causality"),
                              fixture_path(prefix + "_world"));
}

}  // namespace testing_support
