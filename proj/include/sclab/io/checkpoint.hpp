#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

namespace sclab::io {

using NamedTensor = std::pair<std::string, Eigen::MatrixXd>;

/// Writes tensors as a flat little-endian float64 blob (`bin_path`) plus a
/// JSON manifest listing {name, shape, offset} per tensor, offsets in bytes.
void save_checkpoint(const std::string& bin_path, const std::string& manifest_path,
                     const std::vector<NamedTensor>& tensors);

std::vector<NamedTensor> load_checkpoint(const std::string& bin_path,
                                         const std::string& manifest_path);

}  // namespace sclab::io
