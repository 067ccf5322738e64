#include "sst/oracle.hpp"

#include <set>

namespace sst {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

WordSpace::WordSpace(std::string alphabet, std::size_t min_len, std::size_t max_len)
    : alphabet_(std::move(alphabet)), min_len_(min_len) {
  constexpr std::size_t kCap = std::size_t{1} << 62;
  const std::size_t k = alphabet_.size();
  std::size_t level = 1;
  for (std::size_t len = 0; len < min_len; ++len) level = level * k > kCap ? kCap : level * k;
  for (std::size_t len = min_len; len <= max_len; ++len) {
    level_start_.push_back(size_);
    size_ = size_ + level > kCap ? kCap : size_ + level;
    level = level * k > kCap ? kCap : level * k;
  }
  level_start_.push_back(size_);
}

Word WordSpace::at(std::size_t index) const {
  std::size_t len_offset = 0;
  while (level_start_[len_offset + 1] <= index) ++len_offset;
  std::size_t rank = index - level_start_[len_offset];
  Word w(min_len_ + len_offset, '\0');
  for (std::size_t i = w.size(); i-- > 0;) {
    w[i] = alphabet_[rank % alphabet_.size()];
    rank /= alphabet_.size();
  }
  return w;
}

namespace {

WordSpace checked_space(const Sst& sst, std::size_t max_len, std::size_t budget) {
  WordSpace space(sst.alphabet(), 1, max_len);
  if (space.size() > budget)
    throw Error(ErrorCode::BudgetExceeded, "input space of " + std::to_string(space.size()) +
                                               " words exceeds budget " + std::to_string(budget));
  return space;
}

template <class Count>
OracleReading scan(const Sst& sst, std::size_t max_len, std::size_t budget, Exec exec,
                   Count&& count) {
  const WordSpace space = checked_space(sst, max_len, budget);
  OracleReading reading;
  reading.inputs_scanned = space.size();
  if (space.size() == 0) return reading;
  auto [index, value] = argmax_first<std::uint64_t>(
      space.size(), [&](std::size_t i) { return count(space.at(i)); }, exec);
  reading.maximum = value;
  reading.witness = space.at(index);
  return reading;
}

template <class Count>
OracleReading scan_reference(const Sst& sst, std::size_t max_len, Count&& count) {
  OracleReading reading;
  if (sst.alphabet().empty()) return reading;
  bool first = true;
  for (std::size_t len = 1; len <= max_len; ++len) {
    // Odometer over alphabet positions, most significant first.
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      Word u;
      for (auto d : digits) u.push_back(sst.alphabet()[d]);
      const std::uint64_t v = count(u);
      ++reading.inputs_scanned;
      if (first || v > reading.maximum) {
        reading.maximum = v;
        reading.witness = u;
        first = false;
      }
      std::size_t i = len;
      while (i > 0 && ++digits[i - 1] == sst.alphabet().size()) digits[--i] = 0;
      if (i == 0) break;
    }
  }
  return reading;
}

}  // namespace

OracleReading valuedness_oracle(const Sst& sst, std::size_t max_len, std::size_t budget,
                                Exec exec) {
  return scan(sst, max_len, budget, exec,
              [&](const Word& u) { return std::uint64_t{outputs(sst, u, budget).size()}; });
}

OracleReading ambiguity_oracle(const Sst& sst, std::size_t max_len, std::size_t budget,
                               Exec exec) {
  return scan(sst, max_len, budget, exec,
              [&](const Word& u) { return count_accepting_runs(sst, u); });
}

OracleReading valuedness_oracle_reference(const Sst& sst, std::size_t max_len,
                                          std::size_t budget) {
  checked_space(sst, max_len, budget);
  return scan_reference(sst, max_len, [&](const Word& u) {
    return std::uint64_t{outputs_by_runs(sst, u, budget).size()};
  });
}

OracleReading ambiguity_oracle_reference(const Sst& sst, std::size_t max_len,
                                         std::size_t budget) {
  checked_space(sst, max_len, budget);
  return scan_reference(sst, max_len, [&](const Word& u) {
    return std::uint64_t{enumerate_runs(sst, u, budget).size()};
  });
}

}  // namespace sst
