#include "nchardy/permutation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "nchardy/error.hpp"

namespace nchardy {

CycleType::CycleType(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_) {
    if (p < 1) throw Error(ErrorCode::invalid_argument, "partition parts must be positive");
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

int CycleType::size() const noexcept {
  return std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::string CycleType::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out + "]";
}

std::vector<CycleType> partitions(int n) {
  std::vector<CycleType> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int cap) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int part = std::min(remaining, cap); part >= 1; --part) {
      current.push_back(part);
      rec(remaining - part, part);
      current.pop_back();
    }
  };
  if (n > 0) rec(n, n);
  return out;
}

// ---------------------------------------------------------------------------

Permutation::Permutation(std::vector<std::uint8_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto v : images_) {
    if (v >= images_.size() || seen[v]) {
      throw Error(ErrorCode::invalid_argument, "images do not form a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<std::uint8_t> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), std::uint8_t{0});
  return Permutation(std::move(img));
}

Permutation Permutation::from_one_based(const std::vector<int>& images) {
  std::vector<std::uint8_t> img;
  img.reserve(images.size());
  for (int v : images) {
    if (v < 1 || v > static_cast<int>(images.size())) {
      throw Error(ErrorCode::invalid_argument, "permutation image out of range");
    }
    img.push_back(static_cast<std::uint8_t>(v - 1));
  }
  return Permutation(std::move(img));
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 1);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int from = c[i];
      const int to = c[(i + 1) % c.size()];
      if (from < 1 || from > n || to < 1 || to > n) {
        throw Error(ErrorCode::invalid_argument, "cycle point out of range");
      }
      img[from - 1] = to;
    }
  }
  return from_one_based(img);
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  std::vector<std::uint8_t> img(b.images_.size());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = a.images_[b.images_[i]];
  Permutation out;
  out.images_ = std::move(img);
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<std::uint8_t> img(images_.size());
  for (std::size_t i = 0; i < img.size(); ++i) img[images_[i]] = static_cast<std::uint8_t>(i);
  Permutation out;
  out.images_ = std::move(img);
  return out;
}

int Permutation::cycle_count() const { return cycle_type().length(); }

CycleType Permutation::cycle_type() const {
  std::vector<bool> seen(images_.size(), false);
  std::vector<int> parts;
  for (std::size_t start = 0; start < images_.size(); ++start) {
    if (seen[start]) continue;
    int len = 0;
    for (std::size_t i = start; !seen[i]; i = images_[i]) {
      seen[i] = true;
      ++len;
    }
    parts.push_back(len);
  }
  return CycleType(std::move(parts));
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  std::vector<std::uint8_t> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), std::uint8_t{0});
  out.reserve(factorial(n));
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

int cycle_count(const Permutation& sigma) { return sigma.cycle_count(); }

Permutation representative(const CycleType& type) {
  const int n = type.size();
  std::vector<std::uint8_t> img(static_cast<std::size_t>(n));
  int start = 0;
  for (int part : type.parts()) {
    for (int i = 0; i < part; ++i) {
      img[start + i] = static_cast<std::uint8_t>(start + (i + 1) % part);
    }
    start += part;
  }
  return Permutation(std::move(img));
}

std::uint64_t factorial(int n) {
  std::uint64_t out = 1;
  for (int i = 2; i <= n; ++i) out *= static_cast<std::uint64_t>(i);
  return out;
}

}  // namespace nchardy
