#pragma once

#include "davies/event.hpp"
#include "davies/linalg.hpp"
#include "davies/model.hpp"

namespace davies {

struct DaviesOptions {
  // Cap on the total number of detections (both channels) in a configuration.
  int n_max = 6;
  // Gauss-Legendre order of the outermost simplex dimension.
  int quad_order = 24;
  // Segments longer than this are split; the map is multiplicative across cuts.
  double max_segment_length = 1.0;
};

struct MapResult {
  Superop map;
  // Frobenius distance to the same integral at reduced orders.
  double quadrature_error = 0.0;
  // Bound on the mass of dropped configurations (more than n_max detections),
  // from Poisson domination at the maximal detection rate.
  double truncation_error = 0.0;

  double error_estimate() const { return quadrature_error + truncation_error; }
};

// Heisenberg-picture map E^t[E] obtained by integrating the trajectory words
// Y J Y ... J Y over all detection configurations in the event. Unconstrained
// regions are expanded to at most n_max detections in total.
// Throws CapacityError when the event demands more than n_max detections and
// ValidationError for malformed events.
MapResult davies_map(const Model& m, const Event& e, const DaviesOptions& opts = {});

// Tr(rho E^t[E](I)).
double probability(const Model& m, const DensityMatrix& rho, const Event& e,
                   const DaviesOptions& opts = {});

}  // namespace davies
