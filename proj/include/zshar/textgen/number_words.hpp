#pragma once

#include <cstdint>
#include <string>

namespace zshar::textgen {

// English cardinal: 0 -> "zero", 21 -> "twenty-one", 115 -> "one hundred fifteen",
// 2'000'003 -> "two million three".
std::string number_to_words(std::uint64_t n);

}  // namespace zshar::textgen
