#pragma once

#include <stdexcept>
#include <string>

namespace rdslab {

/// Malformed or infeasible input data (files, graphs, configs).
struct data_error : std::runtime_error {
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical method cannot proceed (non-reversible chain, rank deficiency, ...).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rdslab
