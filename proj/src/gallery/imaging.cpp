#include "monocomp/gallery/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace monocomp::gallery {

namespace {

/// Deterministic standard normals: mt19937_64 + Box-Muller (avoids the
/// implementation-defined std::normal_distribution stream).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform() {
    return (rng_() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0,1)
  }
  std::mt19937_64 rng_;
  bool have_ = false;
  double cached_ = 0.0;
};

}  // namespace

Image make_cross_scene(std::size_t size) {
  Image img{size, size, std::vector<double>(size * size, 0.0)};
  // two dotted bars of isolated emitters through the center
  const std::size_t c = size / 2;
  const std::size_t lo = size / 8;
  const std::size_t hi = size - size / 8;
  for (std::size_t k = lo; k < hi; k += 2) {
    img.at(c, k) = 1.0;
    img.at(k, c) = 1.0;
    if (k + 1 < size && c >= 3) {
      img.at(c - 3, k) = 1.0;  // parallel dotted line thickens the bar
      img.at(k, c + 3) = 1.0;
    }
  }
  return img;
}

ImagingInstance build_imaging(const Image& scene, double sigma, std::size_t kernel_size,
                              double noise_level, std::size_t coarse, std::size_t fine,
                              std::uint64_t seed) {
  if (scene.width != fine || scene.height != fine)
    throw std::invalid_argument("imaging: scene must match the fine resolution");
  if (coarse == 0 || fine % coarse != 0)
    throw std::invalid_argument("imaging: fine must be divisible by coarse");
  const std::size_t ratio = fine / coarse;

  // window offsets for an even or odd kernel size, centered
  const long lo = -static_cast<long>(kernel_size / 2) + (kernel_size % 2 == 0 ? 1 : 0);
  const long hi = static_cast<long>(kernel_size / 2);
  std::vector<double> kern1d;
  for (long o = lo; o <= hi; ++o)
    kern1d.push_back(std::exp(-0.5 * (o / sigma) * (o / sigma)));
  double ksum = 0.0;
  for (double ka : kern1d)
    for (double kb : kern1d) ksum += ka * kb;

  // A(rc, src) = sum of normalized kernel weights falling into coarse bin rc
  std::vector<SparseMatrix::Triplet> trips;
  std::vector<double> acc(coarse * coarse);
  std::vector<std::size_t> touched;
  for (std::size_t sr = 0; sr < fine; ++sr) {
    for (std::size_t sc = 0; sc < fine; ++sc) {
      const std::size_t src = sr * fine + sc;
      touched.clear();
      for (long dr = lo; dr <= hi; ++dr) {
        const long r = static_cast<long>(sr) + dr;
        if (r < 0 || r >= static_cast<long>(fine)) continue;
        const double kr = kern1d[dr - lo];
        for (long dc = lo; dc <= hi; ++dc) {
          const long c = static_cast<long>(sc) + dc;
          if (c < 0 || c >= static_cast<long>(fine)) continue;
          const std::size_t bin = (r / ratio) * coarse + (c / ratio);
          if (acc[bin] == 0.0) touched.push_back(bin);
          acc[bin] += kr * kern1d[dc - lo] / ksum;
        }
      }
      std::sort(touched.begin(), touched.end());
      for (std::size_t bin : touched) {
        trips.push_back({bin, src, acc[bin]});
        acc[bin] = 0.0;
      }
    }
  }

  ImagingInstance inst{
      {SparseMatrix::from_triplets(coarse * coarse, fine * fine, std::move(trips)),
       {}, SparseMatrix::identity(fine * fine), Penalty::power_law(1e-9, 0.1), 0.5,
       CoercivityWitness::JointKernel},
      scene,
      {}};
  inst.clean_observation = inst.problem.a.multiply(scene.data);

  double signal_rms = 0.0;
  for (double v : inst.clean_observation) signal_rms += v * v;
  signal_rms = std::sqrt(signal_rms / inst.clean_observation.size());
  NormalStream noise(seed);
  inst.problem.b = inst.clean_observation;
  for (double& v : inst.problem.b) v += noise_level * signal_rms * noise.next();
  return inst;
}

EmitterErrors emitter_errors(const Image& recovered, const Image& truth, double threshold) {
  if (recovered.width != truth.width || recovered.height != truth.height)
    throw std::invalid_argument("emitter_errors: shape mismatch");
  EmitterErrors e;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool rec = recovered.data[i] > threshold;
    const bool tru = truth.data[i] > threshold;
    if (rec && !tru) ++e.plus;
    if (tru && !rec) ++e.minus;
  }
  return e;
}

Image support_match(const Image& img, std::size_t k) {
  Image out{img.width, img.height, std::vector<double>(img.size(), 0.0)};
  std::vector<std::size_t> idx(img.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double da = std::abs(img.data[a]);
                      const double db = std::abs(img.data[b]);
                      return da != db ? da > db : a < b;
                    });
  for (std::size_t i = 0; i < k; ++i) out.data[idx[i]] = img.data[idx[i]];
  return out;
}

LinearSolveOptions imaging_solver_options() {
  LinearSolveOptions o;
  o.method = SolveMethod::ConjugateGradient;
  o.cg_tolerance = 1e-10;
  return o;
}

ContinuationSchedule imaging_schedule() {
  ContinuationSchedule s;
  s.eps_floor = 1e-8;
  s.inner_tolerance = 1e-8;
  s.inner_max_iterations = 200;
  return s;
}

}  // namespace monocomp::gallery
