#pragma once

#include <cstdint>
#include <vector>

#include "mri/rng.hpp"
#include "mri/types.hpp"

namespace mri {

// One rigid pose change. The pose is absolute (relative to the reference
// frame) and persists from start_line until the next event.
struct MotionEvent {
  int start_line = 0;  // phase-encode column where this state begins, in [1, n_lines)
  double dx = 0.0;     // pixels
  double dy = 0.0;     // pixels
  double theta = 0.0;  // degrees
};

struct MotionTrajectory {
  std::vector<MotionEvent> events;  // start_line strictly increasing
  int n_lines = 0;
  bool label() const { return !events.empty(); }
};

// Event count uniform on {0..max_events}; start lines drawn without
// replacement from [1, n_lines); parameters uniform in their bounds.
// The count is capped at n_lines - 1 when the line budget is smaller.
MotionTrajectory sample_trajectory(uint64_t seed, int n_lines, int max_events = 16,
                                   double max_trans = 10.0, double max_rot = 10.0);
MotionTrajectory sample_trajectory(Rng& rng, int n_lines, int max_events = 16,
                                   double max_trans = 10.0, double max_rot = 10.0);

// Rotation by theta degrees about the image center ((H-1)/2, (W-1)/2) with
// bilinear interpolation and zero boundary, then translation applied exactly
// in k-space as a circular linear phase ramp.
ComplexImage rigid_transform(const ComplexImage& img, double dx, double dy,
                             double theta);

// Column-wise composite acquisition: each motion segment contributes its
// columns of fft2c(sense_expand(rigid_transform(image, pose), maps)).
// Segment 0 (before the first event) uses the identity pose.
KSpace corrupt_kspace(const ComplexImage& image, const SensitivityMaps& maps,
                      const MotionTrajectory& traj);

}  // namespace mri
