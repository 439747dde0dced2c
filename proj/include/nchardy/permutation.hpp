#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace nchardy {

/// Partition of n into weakly decreasing positive parts.
class CycleType {
 public:
  CycleType() = default;
  explicit CycleType(std::vector<int> parts);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int size() const noexcept;  // n
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  std::string to_string() const;  // "[2,1]"

  friend auto operator<=>(const CycleType&, const CycleType&) = default;

 private:
  std::vector<int> parts_;
};

/// All partitions of n, in reverse lexicographic order starting with [n].
std::vector<CycleType> partitions(int n);

/// A bijection of {0..n-1}. Construction from 1-based images is available for
/// I/O; internally everything is 0-based.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint8_t> images);

  static Permutation identity(int n);
  static Permutation from_one_based(const std::vector<int>& images);
  /// Product of disjoint cycles given with 1-based points, e.g. {{1,2},{3}}.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles);

  int size() const noexcept { return static_cast<int>(images_.size()); }
  int operator()(int i) const noexcept { return images_[i]; }
  const std::vector<std::uint8_t>& images() const noexcept { return images_; }

  /// (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  Permutation inverse() const;

  int cycle_count() const;
  CycleType cycle_type() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint8_t> images_;
};

/// All n! permutations in lexicographic order of their image sequences.
std::vector<Permutation> all_permutations(int n);

int cycle_count(const Permutation& sigma);

/// A fixed representative with the given cycle type (cycles on consecutive points).
Permutation representative(const CycleType& type);

std::uint64_t factorial(int n);

}  // namespace nchardy
