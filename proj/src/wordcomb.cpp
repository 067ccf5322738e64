#include "sst/wordcomb.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace sst {

namespace {

/// pi[i] = length of the longest proper border of w[0..i].
std::vector<std::size_t> prefix_function(std::string_view w) {
  std::vector<std::size_t> pi(w.size(), 0);
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && w[i] != w[k]) k = pi[k - 1];
    if (w[i] == w[k]) ++k;
    pi[i] = k;
  }
  return pi;
}

/// |rt(w[0..len))| given the prefix function of w.
std::size_t root_length(const std::vector<std::size_t>& pi, std::size_t len) {
  const std::size_t period = len - pi[len - 1];
  return len % period == 0 ? period : len;
}

}  // namespace

Word primitive_root(std::string_view w) {
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "the empty word has no primitive root");
  return Word(w.substr(0, root_length(prefix_function(w), w.size())));
}

std::vector<std::size_t> cuts(std::string_view w, std::size_t C) {
  if (C == 0) throw Error(ErrorCode::InvalidArgument, "cut bound C must be at least 1");
  std::vector<std::size_t> result;
  std::size_t start = 0;
  while (start < w.size()) {
    const auto rest = w.substr(start);
    const auto pi = prefix_function(rest);
    std::size_t best = 1;  // a single letter always qualifies
    for (std::size_t len = rest.size(); len >= 1; --len) {
      if (root_length(pi, len) <= C) {
        best = len;
        break;
      }
    }
    start += best;
    result.push_back(start);
  }
  return result;
}

// ---------------------------------------------------------------------------

ParamWord ParamWord::constant(Word w) {
  ParamWord p;
  p.constants_[0] = std::move(w);
  return p;
}

void ParamWord::append_factor(Word base, ParamId param) {
  factors_.push_back({std::move(base), param});
  constants_.emplace_back();
}

void ParamWord::append(const ParamWord& other) {
  constants_.back() += other.constants_.front();
  for (std::size_t i = 0; i < other.factors_.size(); ++i) {
    factors_.push_back(other.factors_[i]);
    constants_.push_back(other.constants_[i + 1]);
  }
}

std::string to_string(const ParamWord& p) {
  std::string out = p.constants()[0];
  for (std::size_t i = 0; i < p.factors().size(); ++i) {
    out += "(" + p.factors()[i].base + ")^{p" + std::to_string(p.factors()[i].param) + "}";
    out += p.constants()[i + 1];
  }
  return out;
}

std::vector<ParamId> Inequality::parameters() const {
  std::set<ParamId> ids;
  for (const auto& f : left.factors()) ids.insert(f.param);
  for (const auto& f : right.factors()) ids.insert(f.param);
  return {ids.begin(), ids.end()};
}

Word instantiate(const ParamWord& p, const Assignment& values) {
  Word out = p.constants()[0];
  for (std::size_t i = 0; i < p.factors().size(); ++i) {
    const auto& f = p.factors()[i];
    if (f.param >= values.size())
      throw Error(ErrorCode::MissingParameter,
                  "no value for parameter p" + std::to_string(f.param));
    for (std::uint64_t k = 0; k < values[f.param]; ++k) out += f.base;
    out += p.constants()[i + 1];
  }
  return out;
}

bool is_solution(const Inequality& e, const Assignment& values) {
  return instantiate(e.left, values) != instantiate(e.right, values);
}

std::vector<std::uint64_t> nonsolutions_single(const Inequality& e, std::uint64_t bound) {
  const auto ids = e.parameters();
  if (ids.size() != 1)
    throw Error(ErrorCode::InvalidArgument,
                "expected exactly one parameter, found " + std::to_string(ids.size()));
  Assignment values(ids[0] + 1, 0);
  std::vector<std::uint64_t> result;
  for (std::uint64_t x = 0; x <= bound; ++x) {
    values[ids[0]] = x;
    if (!is_solution(e, values)) result.push_back(x);
  }
  return result;
}

std::optional<Assignment> find_system_solution(std::span<const Inequality> system,
                                               const Box& box, Exec exec) {
  if (system.empty()) throw Error(ErrorCode::EmptySystem, "a system needs at least one inequality");
  std::size_t total = 1;
  for (const auto& r : box) {
    if (r.hi < r.lo) return std::nullopt;
    total *= static_cast<std::size_t>(r.hi - r.lo + 1);
  }
  auto decode = [&](std::size_t index) {
    Assignment a(box.size());
    for (std::size_t i = box.size(); i-- > 0;) {
      const auto width = static_cast<std::size_t>(box[i].hi - box[i].lo + 1);
      a[i] = box[i].lo + index % width;
      index /= width;
    }
    return a;
  };
  auto solves_all = [&](std::size_t index) {
    const Assignment a = decode(index);
    return std::ranges::all_of(system, [&](const Inequality& e) { return is_solution(e, a); });
  };
  if (auto hit = find_first(total, solves_all, exec)) return decode(*hit);
  return std::nullopt;
}

std::optional<Box> find_solution_box(const Inequality& e, const Assignment& seed,
                                     std::span<const std::uint64_t> sizes, std::uint64_t bound,
                                     std::span<const ParamId> order) {
  if (!is_solution(e, seed))
    throw Error(ErrorCode::NotASolution, "the seed assignment does not solve the inequality");
  const std::size_t k = sizes.size();
  const auto ids = e.parameters();
  if (!ids.empty() && ids.back() >= k)
    throw Error(ErrorCode::InvalidArgument, "a size is required for every parameter id");

  std::vector<ParamId> perm(order.begin(), order.end());
  if (perm.empty()) {
    perm.resize(k);
    std::iota(perm.begin(), perm.end(), ParamId{0});
  }
  {
    auto sorted = perm;
    std::ranges::sort(sorted);
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted.size() != k || sorted[i] != i)
        throw Error(ErrorCode::InvalidArgument, "order must be a permutation of the parameter ids");
  }
  for (auto s : sizes)
    if (s > bound) return std::nullopt;

  auto box_inside = [&](const Box& box) {
    Assignment point(k);
    for (std::size_t i = 0; i < k; ++i) point[i] = box[i].lo;
    while (true) {
      if (!is_solution(e, point)) return false;
      std::size_t i = k;
      while (i > 0) {
        --i;
        if (point[i] < box[i].hi) {
          ++point[i];
          break;
        }
        point[i] = box[i].lo;
        if (i == 0) return true;
      }
      if (k == 0) return true;
    }
  };

  // Odometer over lower ends; perm[0] is the most significant digit.
  Box box(k);
  for (std::size_t i = 0; i < k; ++i) box[i] = {0, sizes[i]};
  while (true) {
    if (box_inside(box)) return box;
    std::size_t d = k;
    while (d > 0) {
      --d;
      const ParamId p = perm[d];
      if (box[p].lo + sizes[p] < bound) {
        ++box[p].lo;
        box[p].hi = box[p].lo + sizes[p];
        break;
      }
      box[p] = {0, sizes[p]};
      if (d == 0) return std::nullopt;
    }
    if (k == 0) return std::nullopt;
  }
}

}  // namespace sst
