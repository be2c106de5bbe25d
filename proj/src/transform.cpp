#include "sigmalab/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace sigmalab {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (dim, N, direction) and kept.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    int dims[3] = {n, n, n};
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    fftw_complex* buf = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

class Buffer {
 public:
  explicit Buffer(Eigen::Index n) : n_(n), data_(fftw_alloc_complex(static_cast<std::size_t>(n))) {}
  ~Buffer() { fftw_free(data_); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;

  fftw_complex* data() { return data_; }
  std::complex<double>& operator[](Eigen::Index i) {
    return reinterpret_cast<std::complex<double>*>(data_)[i];
  }

 private:
  Eigen::Index n_;
  fftw_complex* data_;
};

void execute(const Grid& grid, Buffer& buf, int sign) {
  fftw_plan plan = PlanCache::instance().get(grid.dim(), grid.points(), sign);
  fftw_execute_dft(plan, buf.data(), buf.data());
}

}  // namespace

SpectralField transform_forward(const RealField& f) {
  const Grid& grid = *f.grid;
  if (f.values.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
  const Eigen::Index n = grid.size();
  Buffer buf(n);
  for (Eigen::Index i = 0; i < n; ++i) buf[i] = f.values[i];
  execute(grid, buf, FFTW_FORWARD);
  Eigen::ArrayXcd out(n);
  const double w = grid.cell_volume();
  const auto& phase = grid.centring_phase();
  for (Eigen::Index i = 0; i < n; ++i) out[i] = buf[i] * (w * phase[i]);
  return SpectralField(f.grid, std::move(out));
}

Eigen::ArrayXcd transform_inverse_complex(const SpectralField& F) {
  const Grid& grid = *F.grid;
  if (F.coeffs.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
  const Eigen::Index n = grid.size();
  Buffer buf(n);
  const double w = 1.0 / grid.box_volume();
  const auto& phase = grid.centring_phase();
  for (Eigen::Index i = 0; i < n; ++i) buf[i] = F.coeffs[i] * (w * phase[i]);
  execute(grid, buf, FFTW_BACKWARD);
  Eigen::ArrayXcd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = buf[i];
  return out;
}

RealField transform_inverse(const SpectralField& F) {
  return RealField(F.grid, transform_inverse_complex(F).real());
}

}  // namespace sigmalab
