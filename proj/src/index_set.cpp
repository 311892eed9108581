#include "csa/index_set.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace csa {

long long total_degree_cardinality(int d, int n) {
  if (d < 1 || n < 0) throw std::invalid_argument("total_degree: need d >= 1, n >= 0");
  // C(d+n, min(d,n)) built up multiplicatively with overflow checks.
  const long long k = std::min(d, n);
  long long result = 1;
  for (long long i = 1; i <= k; ++i) {
    // result *= (d + n - k + i); result /= i;  -- keep exact by dividing late
    const long long num = d + n - k + i;
    if (result > std::numeric_limits<long long>::max() / num)
      throw std::overflow_error("total_degree cardinality overflows machine range");
    result = result * num / i;  // exact: product of i consecutive ints divisible by i!
  }
  return result;
}

MultiIndexSet::MultiIndexSet(int d, std::vector<std::vector<int>> indices)
    : d_(d), indices_(std::move(indices)) {
  max_degree_ = 0;
  for (const auto& idx : indices_)
    for (int c : idx) max_degree_ = std::max(max_degree_, c);
}

namespace {

// Enumerate all compositions of `total` into `d` parts, lexicographically
// descending, appending to out.
void enumerate_level(int d, int total, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
  const int pos = static_cast<int>(current.size());
  if (pos == d - 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    current.push_back(v);
    enumerate_level(d, total - v, current, out);
    current.pop_back();
  }
}

}  // namespace

MultiIndexSet MultiIndexSet::total_degree(int d, int n) {
  const long long count = total_degree_cardinality(d, n);
  if (count > (1LL << 31))
    throw std::overflow_error("total_degree set too large to materialize");
  std::vector<std::vector<int>> indices;
  indices.reserve(static_cast<std::size_t>(count));
  std::vector<int> current;
  for (int level = 0; level <= n; ++level)
    enumerate_level(d, level, current, indices);
  return MultiIndexSet(d, std::move(indices));
}

bool MultiIndexSet::contains(const std::vector<int>& idx) const {
  return std::find(indices_.begin(), indices_.end(), idx) != indices_.end();
}

std::string MultiIndexSet::to_json() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < indices_[i].size(); ++j) {
      if (j) os << ',';
      os << indices_[i][j];
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace csa
