#pragma once

#include <filesystem>

#include "bitext/nmt/model.hpp"
#include "bitext/numkit/container.hpp"

namespace bitext::nmt {

// Values and Adadelta accumulators of every Param, plus dims, vocabulary and
// BPE merges in the header meta, so a checkpoint is self-contained.
template <typename Real>
num::Container to_container(const NmtModel<Real>& model);

// Throws ConfigError when the container precision differs from Real.
template <typename Real>
NmtModel<Real> from_container(const num::Container& c);

template <typename Real>
void save_model(const std::filesystem::path& path, const NmtModel<Real>& model);

template <typename Real>
NmtModel<Real> load_model(const std::filesystem::path& path);

std::string checkpoint_name(std::size_t step);  // "ckpt-<step>.btf"

}  // namespace bitext::nmt
