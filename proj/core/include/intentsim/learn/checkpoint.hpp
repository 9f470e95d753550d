#pragma once

#include <string>

#include "intentsim/nn/tensor.hpp"

namespace intentsim::learn {

/// Versioned binary container for network parameters:
///   magic (5 bytes: "SIMQ1" policy / "SIMP1" predictor)
///   u32 header length (little-endian), JSON header bytes
///   u64 total float count (little-endian)
///   raw little-endian float32 values, tensors concatenated in the order
///   listed by the header's "tensors" manifest (which mirrors the
///   network's parameter order, running statistics included).
/// The JSON header carries a caller-supplied "meta" object with the full
/// resolved run configuration.
inline constexpr char kPolicyMagic[6] = "SIMQ1";
inline constexpr char kPredictorMagic[6] = "SIMP1";

void save_checkpoint(const std::string& path, const char* magic,
                     const std::vector<nn::ParamView<float>>& params,
                     const std::string& meta_json);

/// Loads into an existing parameter list; tensor names and sizes must match
/// the network the caller built. Returns the header's meta JSON text.
std::string load_checkpoint(const std::string& path, const char* magic,
                            std::vector<nn::ParamView<float>>& params);

/// Reads just the meta JSON (for spec validation before building networks).
std::string read_checkpoint_meta(const std::string& path, const char* magic);

}  // namespace intentsim::learn
