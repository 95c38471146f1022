#pragma once

#include <cstdint>

#include "monocomp/solver.hpp"

namespace monocomp::gallery {

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> data;  // row-major

  double& at(std::size_t r, std::size_t c) { return data[r * width + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * width + c]; }
  std::size_t size() const { return data.size(); }
};

/// Sparse 0-1 cross of isolated emitters on a size x size grid.
Image make_cross_scene(std::size_t size);

struct ImagingInstance {
  CompositeProblem problem;  // A = binning o blur, Lambda = I
  Image truth;
  std::vector<double> clean_observation;  // A * truth, before noise
};

/// Gaussian PSF with standard deviation sigma truncated to a
/// kernel_size x kernel_size window and normalized to unit sum, composed
/// with coarse-graining (pixel sums) from fine to coarse resolution.
/// Additive white Gaussian noise with (noise RMS)/(signal RMS) = noise_level,
/// generated by a seeded Box-Muller stream.
ImagingInstance build_imaging(const Image& scene, double sigma, std::size_t kernel_size,
                              double noise_level, std::size_t coarse, std::size_t fine,
                              std::uint64_t seed);

struct EmitterErrors {
  std::size_t plus = 0;   // recovered-active pixels not active in truth
  std::size_t minus = 0;  // truth-active pixels missed
};

EmitterErrors emitter_errors(const Image& recovered, const Image& truth, double threshold);

/// Keeps the k largest-magnitude pixels, zeroes the rest (k-sparse projection
/// used to compare dense l1 reconstructions on equal support size).
Image support_match(const Image& img, std::size_t k);

LinearSolveOptions imaging_solver_options();
ContinuationSchedule imaging_schedule();

}  // namespace monocomp::gallery
