#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fred {

/// Suffix array of an integer string by induced sorting (SA-IS), linear time.
/// A suffix that is a proper prefix of another sorts first. Values are
/// arbitrary 32-bit ids; they are rank-compressed internally.
std::vector<std::uint64_t> build_suffix_array(std::span<const std::uint32_t> text);

}  // namespace fred
