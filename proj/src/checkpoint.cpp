#include "sclab/io/checkpoint.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

#include "sclab/error.hpp"

namespace sclab::io {

void save_checkpoint(const std::string& bin_path, const std::string& manifest_path,
                     const std::vector<NamedTensor>& tensors) {
  static_assert(std::endian::native == std::endian::little, "checkpoint writer assumes LE host");
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw DataError(bin_path + ": cannot open file for writing");

  nlohmann::json manifest = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& [name, tensor] : tensors) {
    manifest.push_back({{"name", name},
                        {"shape", {tensor.rows(), tensor.cols()}},
                        {"offset", offset}});
    // Row-major on disk so offsets read naturally.
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
        const double v = tensor(r, c);
        bin.write(reinterpret_cast<const char*>(&v), sizeof(double));
      }
    }
    offset += static_cast<std::size_t>(tensor.size()) * sizeof(double);
  }
  if (!bin) throw DataError(bin_path + ": write failed");

  std::ofstream mf(manifest_path);
  if (!mf) throw DataError(manifest_path + ": cannot open file for writing");
  mf << manifest.dump(2) << "\n";
}

std::vector<NamedTensor> load_checkpoint(const std::string& bin_path,
                                         const std::string& manifest_path) {
  std::ifstream mf(manifest_path);
  if (!mf) throw DataError(manifest_path + ": cannot open file");
  nlohmann::json manifest;
  try {
    mf >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path + ": " + e.what());
  }

  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw DataError(bin_path + ": cannot open file");

  std::vector<NamedTensor> tensors;
  for (const auto& entry : manifest) {
    const std::string name = entry.at("name");
    const Eigen::Index rows = entry.at("shape").at(0);
    const Eigen::Index cols = entry.at("shape").at(1);
    const std::size_t offset = entry.at("offset");
    bin.seekg(static_cast<std::streamoff>(offset));
    Eigen::MatrixXd tensor(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        double v = 0.0;
        bin.read(reinterpret_cast<char*>(&v), sizeof(double));
        tensor(r, c) = v;
      }
    }
    if (!bin) throw DataError(bin_path + ": truncated checkpoint");
    tensors.emplace_back(name, std::move(tensor));
  }
  return tensors;
}

}  // namespace sclab::io
