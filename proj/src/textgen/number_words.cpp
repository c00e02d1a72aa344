#include "zshar/textgen/number_words.hpp"

#include <array>
#include <string_view>

namespace zshar::textgen {
namespace {

constexpr std::array<std::string_view, 20> kSmall{
    "zero",    "one",     "two",       "three",    "four",     "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};

constexpr std::array<std::string_view, 10> kTens{"",      "",      "twenty",  "thirty", "forty",
                                                 "fifty", "sixty", "seventy", "eighty", "ninety"};

constexpr std::array<std::string_view, 7> kScales{
    "", "thousand", "million", "billion", "trillion", "quadrillion", "quintillion"};

std::string below_thousand(unsigned n) {
  std::string out;
  if (n >= 100) {
    out += kSmall[n / 100];
    out += " hundred";
    n %= 100;
    if (n == 0) return out;
    out += ' ';
  }
  if (n < 20) {
    out += kSmall[n];
  } else {
    out += kTens[n / 10];
    if (n % 10 != 0) {
      out += '-';
      out += kSmall[n % 10];
    }
  }
  return out;
}

}  // namespace

std::string number_to_words(std::uint64_t n) {
  if (n == 0) return std::string(kSmall[0]);
  std::array<unsigned, 7> groups{};
  std::size_t count = 0;
  while (n > 0) {
    groups[count++] = static_cast<unsigned>(n % 1000);
    n /= 1000;
  }
  std::string out;
  for (std::size_t i = count; i-- > 0;) {
    if (groups[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += below_thousand(groups[i]);
    if (i > 0) {
      out += ' ';
      out += kScales[i];
    }
  }
  return out;
}

}  // namespace zshar::textgen
