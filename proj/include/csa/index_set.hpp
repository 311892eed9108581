#ifndef CSA_INDEX_SET_HPP
#define CSA_INDEX_SET_HPP

#include <string>
#include <vector>

namespace csa {

/// Multi-index dictionary: an ordered, duplicate-free list of d-tuples of
/// nonnegative integers. Ordering is graded lexicographic (total degree
/// first, then lexicographically descending within a degree level), so the
/// univariate set lists degrees 0..n in order and matrix columns are
/// reproducible across runs.
class MultiIndexSet {
 public:
  static MultiIndexSet total_degree(int d, int n);

  int dimension() const { return d_; }
  int size() const { return static_cast<int>(indices_.size()); }
  /// Maximum univariate degree: max over indices of the max component.
  int max_degree() const { return max_degree_; }
  const std::vector<int>& operator[](int i) const { return indices_[i]; }
  const std::vector<std::vector<int>>& indices() const { return indices_; }

  bool contains(const std::vector<int>& idx) const;

  /// JSON array of index tuples, e.g. [[0,0],[1,0],[0,1]].
  std::string to_json() const;

 private:
  MultiIndexSet(int d, std::vector<std::vector<int>> indices);

  int d_ = 0;
  int max_degree_ = 0;
  std::vector<std::vector<int>> indices_;
};

/// C(d+n, d) with overflow detection.
long long total_degree_cardinality(int d, int n);

}  // namespace csa

#endif
