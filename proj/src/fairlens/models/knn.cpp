#include "fairlens/models/knn.hpp"

#include <algorithm>
#include <numeric>

#include "fairlens/error.hpp"

namespace fairlens {

KNearestNeighbors::KNearestNeighbors(Eigen::MatrixXd x, std::vector<int> y, KnnParams params)
    : x_(std::move(x)), y_(std::move(y)), params_(params) {
  if (params_.neighbors < 1) throw invalid_argument("knn needs at least one neighbor");
  if (x_.rows() == 0) throw invalid_argument("knn needs training rows");
}

double KNearestNeighbors::distance(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                                   const Eigen::Ref<const Eigen::RowVectorXd>& b, DistanceMetric metric) {
  const auto diff = (a - b).array().abs();
  switch (metric) {
    case DistanceMetric::Manhattan: return diff.sum();
    case DistanceMetric::Euclidean: return diff.square().sum();
    case DistanceMetric::Minkowski3: return diff.cube().sum();
  }
  return 0.0;
}

std::vector<double> KNearestNeighbors::predict_scores(const Eigen::MatrixXd& x) const {
  const auto n = static_cast<std::size_t>(x_.rows());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(params_.neighbors), n);
  const Eigen::Index features = x_.cols();

  // Row-major copy makes the lexicographic tie-break a contiguous compare.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> train = x_;
  std::vector<double> dist(n);
  std::vector<std::size_t> idx(n);
  std::vector<double> scores(static_cast<std::size_t>(x.rows()));

  auto before = [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    const double* ra = train.data() + static_cast<Eigen::Index>(a) * features;
    const double* rb = train.data() + static_cast<Eigen::Index>(b) * features;
    for (Eigen::Index c = 0; c < features; ++c) {
      if (ra[c] != rb[c]) return ra[c] < rb[c];
    }
    return y_[a] < y_[b];
  };

  for (Eigen::Index q = 0; q < x.rows(); ++q) {
    const Eigen::RowVectorXd query = x.row(q);
    for (std::size_t i = 0; i < n; ++i) dist[i] = distance(train.row(static_cast<Eigen::Index>(i)), query, params_.metric);
    std::iota(idx.begin(), idx.end(), 0);
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k - 1), idx.end(), before);
    int positives = 0;
    for (std::size_t i = 0; i < k; ++i) positives += y_[idx[i]];
    scores[static_cast<std::size_t>(q)] = static_cast<double>(positives) / static_cast<double>(k);
  }
  return scores;
}

}  // namespace fairlens
