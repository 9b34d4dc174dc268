#include "mammo/zernike.hpp"

#include <numbers>

namespace mammo {

std::vector<ZernikeIndex> standard_moment_indices() {
  std::vector<ZernikeIndex> out;
  for (int n = 3; n <= 10; ++n)
    for (int m = n % 2; m <= n; m += 2)
      out.push_back({n, m});
  return out;
}

ZernikeProjector::ZernikeProjector(Eigen::Index rows, Eigen::Index cols,
                                   std::vector<ZernikeIndex> indices)
    : rows_(rows), cols_(cols), indices_(std::move(indices)) {
  if (rows < 1 || cols < 1)
    throw DataError("Zernike moments need a non-empty component");
  for (const auto &idx : indices_)
    detail::check_index(idx.n, idx.m);

  const double radius = static_cast<double>(std::min(rows, cols)) / 2.0;
  const double cy = (static_cast<double>(rows) - 1.0) / 2.0;
  const double cx = (static_cast<double>(cols) - 1.0) / 2.0;
  pixel_area_ = 1.0 / (radius * radius);

  std::vector<double> rho, theta;
  for (Eigen::Index x = 0; x < cols; ++x)
    for (Eigen::Index y = 0; y < rows; ++y) {
      const double xn = (static_cast<double>(x) - cx) / radius;
      const double yn = (static_cast<double>(y) - cy) / radius;
      const double r = std::hypot(xn, yn);
      if (r > 1.0)
        continue;
      pixels_.push_back(x * rows + y);
      rho.push_back(r);
      theta.push_back(std::atan2(yn, xn));
    }

  const auto np = static_cast<Eigen::Index>(pixels_.size());
  const auto ni = static_cast<Eigen::Index>(indices_.size());
  basis_.resize(np, ni);
  scale_.resize(ni);
  for (Eigen::Index j = 0; j < ni; ++j) {
    const auto [n, m] = indices_[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < np; ++i)
      basis_(i, j) = basis(n, m, rho[static_cast<std::size_t>(i)], theta[static_cast<std::size_t>(i)]);
    scale_[j] = (n + 1) / std::numbers::pi * pixel_area_;
  }
}

Eigen::VectorXcd ZernikeProjector::complex_moments(const Image &component) const {
  if (component.rows() != rows_ || component.cols() != cols_)
    throw std::invalid_argument("component size does not match the projector grid");
  Eigen::VectorXd f(static_cast<Eigen::Index>(pixels_.size()));
  for (std::size_t i = 0; i < pixels_.size(); ++i)
    f[static_cast<Eigen::Index>(i)] = component.data()[pixels_[i]];
  // Σ f conj(V) = (Vᴴ f)
  return (basis_.adjoint() * f.cast<std::complex<double>>()).cwiseProduct(scale_.cast<std::complex<double>>());
}

ZernikeMomentSet ZernikeProjector::moments(const Image &component) const {
  return {indices_, complex_moments(component).cwiseAbs()};
}

Eigen::VectorXcd complex_moments(const Image &component, std::span<const ZernikeIndex> indices) {
  return ZernikeProjector(component.rows(), component.cols(), {indices.begin(), indices.end()})
      .complex_moments(component);
}

ZernikeMomentSet moments(const Image &component, std::span<const ZernikeIndex> indices) {
  return ZernikeProjector(component.rows(), component.cols(), {indices.begin(), indices.end()})
      .moments(component);
}

} // namespace mammo
