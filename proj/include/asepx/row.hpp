#ifndef ASEPX_ROW_HPP
#define ASEPX_ROW_HPP

#include <algorithm>
#include <compare>
#include <string>
#include <vector>

#include "asepx/scalar.hpp"

namespace asepx {

/// A 0/1 row of a ball system, columns 1..L stored at 0..L-1.
struct Row {
  std::vector<int> bits;

  Row() = default;
  explicit Row(std::vector<int> b) : bits(std::move(b)) {
    for (int x : bits)
      if (x != 0 && x != 1) throw Error("row entries must be 0 or 1");
  }
  static Row zeros(int L) { return Row(std::vector<int>(static_cast<std::size_t>(L), 0)); }
  static Row parse(const std::string& s) {
    std::vector<int> b;
    for (char c : s) {
      if (c != '0' && c != '1') throw Error("bad row string '" + s + "'");
      b.push_back(c - '0');
    }
    return Row(std::move(b));
  }

  int size() const { return static_cast<int>(bits.size()); }
  int weight() const {
    int s = 0;
    for (int x : bits) s += x;
    return s;
  }
  int operator[](int k) const { return bits[static_cast<std::size_t>(k)]; }
  int& operator[](int k) { return bits[static_cast<std::size_t>(k)]; }
  std::string to_string() const {
    std::string s;
    for (int x : bits) s.push_back(static_cast<char>('0' + x));
    return s;
  }
  auto operator<=>(const Row&) const = default;
};

/// All rows of length L with exactly l ones, in lexicographic order.
inline std::vector<Row> rows_with_weight(int L, int l) {
  std::vector<Row> out;
  if (l < 0 || l > L) return out;
  std::vector<int> b(static_cast<std::size_t>(L), 0);
  for (int k = L - l; k < L; ++k) b[static_cast<std::size_t>(k)] = 1;
  do {
    out.emplace_back(b);
  } while (std::next_permutation(b.begin(), b.end()));
  return out;
}

}  // namespace asepx

#endif  // ASEPX_ROW_HPP
